import sys

from pmds.cli import main

sys.exit(main())
