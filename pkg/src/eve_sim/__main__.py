import sys

from eve_sim.cli import main

sys.exit(main())
