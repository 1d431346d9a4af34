from ffverify.cli import main

main()
