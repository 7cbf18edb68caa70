"""Main entry point for running edist as a module."""
from edist.app import main

if __name__ == '__main__':
    main()
