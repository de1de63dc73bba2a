from efgc.cli import main

main()
