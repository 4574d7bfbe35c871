from __future__ import print_function, division

import sys

from src.cli import add_element_arguments, cmd_dims


def main(argv=None):
    import argparse
    parser = argparse.ArgumentParser('Dimension table: closed form against enumeration.')
    add_element_arguments(parser)
    parser.add_argument('--mesh', help='JSON mesh file supplying the face counts')
    parser.add_argument('--counts', help='face counts |Delta_0|,...,|Delta_n| (default: one simplex)')
    args = parser.parse_args(argv)
    return cmd_dims(args)


if __name__ == '__main__':
    sys.exit(main())
