import sys

from knotdance.cli import main

sys.exit(main())
