import sys

from twoham.cli import main

sys.exit(main())
