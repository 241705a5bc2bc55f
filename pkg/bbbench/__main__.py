import sys
from bbbench.main import cli

sys.exit(cli())
