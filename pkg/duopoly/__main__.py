import sys

from duopoly.main import main

sys.exit(main())
