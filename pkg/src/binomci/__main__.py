import sys

from binomci.cli import main

sys.exit(main())
