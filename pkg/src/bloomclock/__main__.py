import sys

from bloomclock.cli import main

sys.exit(main())
