import sys

from .verifycli import main

sys.exit(main())
