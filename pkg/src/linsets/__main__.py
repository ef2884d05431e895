from linsets.cli import main

main()
