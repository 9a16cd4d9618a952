"""python -m oval"""
from oval.main import main

main()
