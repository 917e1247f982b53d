"""Entry point:  python -m efpi"""

from .cli import main

if __name__ == "__main__":
    main()
