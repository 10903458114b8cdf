import sys

from pi_forge.cli import main

sys.exit(main())
