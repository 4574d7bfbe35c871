from __future__ import print_function, division

import sys

from src.cli import add_element_arguments, cmd_verify


def main(argv=None):
    import argparse
    parser = argparse.ArgumentParser('Exact partition, unisolvence, block triangularity and continuity checks.')
    add_element_arguments(parser)
    parser.add_argument('--geometry', help='JSON file with the n+1 vertices of the element (default: reference simplex)')
    parser.add_argument('--mesh', help='JSON mesh file, enables the continuity check')
    parser.add_argument('--trials', type=int, default=5, help='random coefficient vectors for the continuity check (default: 5)')
    parser.add_argument('--seed', type=int, default=0, help='random seed (default: 0)')
    parser.add_argument('--float', action='store_true', help='floating point rank check instead of exact arithmetic')
    parser.add_argument('--elimination', choices=['lu', 'bareiss'], default='lu',
                        help='exact determinant by sparse LU or fraction-free Bareiss (default: lu)')
    parser.add_argument('-j', '--jobs', type=int, default=1, help='processes for matrix assembly (default: 1)')
    args = parser.parse_args(argv)
    return cmd_verify(args)


if __name__ == '__main__':
    sys.exit(main())
