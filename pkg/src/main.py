import sys

from multibody.cli import main as cli_main

def main(argv=None):
    if argv is None:
        argv = sys.argv[1:]
    sys.exit(cli_main(argv))

if __name__ == "__main__":
    main(None)
