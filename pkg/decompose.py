from __future__ import print_function, division

import sys

from src.cli import add_element_arguments, cmd_decompose


def main(argv=None):
    import argparse
    parser = argparse.ArgumentParser('List or draw the geometric decomposition of a simplicial lattice.')
    add_element_arguments(parser)
    parser.add_argument('--format', choices=['text', 'json', 'svg'], default='text',
                        help='output format, svg needs n=2 (default: text)')
    args = parser.parse_args(argv)
    return cmd_decompose(args)


if __name__ == '__main__':
    sys.exit(main())
