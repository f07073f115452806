import sys

from pinned_auc.cli import main

if __name__ == "__main__":
    sys.exit(main())
