import sys

from brandubh.cli import main

sys.exit(main())
