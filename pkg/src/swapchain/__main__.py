import sys

from swapchain.cli import main

sys.exit(main())
