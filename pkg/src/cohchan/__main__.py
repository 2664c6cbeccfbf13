import sys
from cohchan.cli import main

sys.exit(main())
