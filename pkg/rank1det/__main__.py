import sys

from rank1det.main import main

sys.exit(main())
