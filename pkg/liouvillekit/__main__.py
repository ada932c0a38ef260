import sys

from liouvillekit.main import main

sys.exit(main())
