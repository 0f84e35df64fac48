import sys

from tipsim.cli import main

sys.exit(main())
