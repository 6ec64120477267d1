"""python -m kgraphlab <fixture> [options]"""

import sys

from .cli import main

sys.exit(main())
