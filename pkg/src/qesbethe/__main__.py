import sys

from qesbethe.driver import main

sys.exit(main())
