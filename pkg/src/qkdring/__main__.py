import sys

from qkdring.cli import main

sys.exit(main())
