import sys

from slfac.cli import main

sys.exit(main())
