import sys

from symbell.cli import main

sys.exit(main())
