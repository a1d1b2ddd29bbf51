import sys

from fracmol.cli import main

sys.exit(main())
