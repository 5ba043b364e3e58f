from unisynth.cli import main

main()
