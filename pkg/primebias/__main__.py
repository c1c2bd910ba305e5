import sys

from primebias.cli import main

sys.exit(main())
