from __future__ import print_function, division

import math

from src.lattice import InvalidArgument


ns_svg = 'http://www.w3.org/2000/svg'

# fill colors by owner dimension: vertex, edge, interior
level_colors = ['#d62728', '#1f77b4', '#2ca02c']

## drawing geometry: equilateral reference triangle
corners = [(0.0, 0.0), (1.0, 0.0), (0.5, math.sqrt(3)/2)]


def demangle(k):
    return k.replace('_', '-')


def rounder(x, prec=4):
    if type(x) is float:
        xr = round(x, prec)
        if xr % 1 == 0:
            return int(xr)
        return xr
    return x


def props_repr(d):
    return ' '.join('{}="{}"'.format(demangle(k), rounder(v)) for k, v in d.items())


class Element:
    def __init__(self, tag, children=None, text=None, **attr):
        self.tag = tag
        self.children = children or []
        self.text = text
        self.attr = attr

    def svg(self):
        props = props_repr(self.attr)
        pre = ' ' if props else ''
        if not self.children and self.text is None:
            return '<{}{}{} />'.format(self.tag, pre, props)
        inner = self.text if self.text is not None else '\n' + '\n'.join(c.svg() for c in self.children) + '\n'
        return '<{}{}{}>{}</{}>'.format(self.tag, pre, props, inner, self.tag)


def embed(a, size, margin):
    """ x(alpha) = sum_i (alpha_i / k) v_i, y axis pointing down """
    k = sum(a)
    x = sum(ai*c[0] for ai, c in zip(a, corners))/k
    y = sum(ai*c[1] for ai, c in zip(a, corners))/k
    scale = size - 2*margin
    return margin + scale*x, margin + scale*(corners[2][1] - y)


def owner_class(f):
    return 'owner-' + '-'.join(str(i) for i in f.indices)


def render_decomposition(d, size=400, margin=30):
    """ SVG text of a two dimensional decomposition, one color per owner dimension """
    if d.n != 2:
        raise InvalidArgument('only two dimensional decompositions can be drawn, got n={}'.format(d.n))
    if d.k < 1:
        raise InvalidArgument('nothing to draw for k=0')
    height = int(math.ceil(margin + (size - 2*margin)*corners[2][1] + margin)) + 60
    radius = max(2.0, 0.35*(size - 2*margin)/d.k)

    rules = ['.level-{} {{ fill: {}; }}'.format(i, c) for i, c in enumerate(level_colors)]
    rules.append('.outline { fill: none; stroke: #444444; stroke-width: 1; }')
    rules.append('text { font-family: sans-serif; font-size: 12px; }')
    style = Element('style', text='\n' + '\n'.join(rules) + '\n')

    k = d.k
    verts = [embed(tuple(k*int(i == j) for i in range(3)), size, margin) for j in range(3)]
    outline = Element('polygon', points=' '.join('{},{}'.format(rounder(x), rounder(y)) for x, y in verts))
    outline.attr['class'] = 'outline'

    nodes = []
    for f, piece in d:
        for a in piece:
            x, y = embed(a, size, margin)
            circle = Element('circle', cx=x, cy=y, r=radius)
            circle.attr['class'] = 'level-{} {}'.format(f.dim, owner_class(f))
            circle.children = [Element('title', text='{} in {}'.format(list(a), list(f.indices)))]
            nodes.append(circle)

    legend = []
    labels = ['vertex', 'edge', 'interior']
    sizes = d.level_sizes()
    for i, label in enumerate(labels):
        y = height - 50 + 16*i
        swatch = Element('circle', cx=margin, cy=y, r=5)
        swatch.attr['class'] = 'level-{}'.format(i)
        legend.append(swatch)
        legend.append(Element('text', x=margin + 12, y=y + 4, text='{} ({} nodes)'.format(label, sizes[i])))

    title = '{} n={} k={} {}'.format(d.kind, d.n, d.k,
                                     ' '.join('{}={}'.format(key, value) for key, value in sorted(d.params.items())))
    caption = Element('text', x=margin, y=16, text=title.strip())

    root = Element('svg', children=[style, outline, Element('g', children=nodes),
                                    Element('g', children=legend), caption],
                   width=size, height=height, xmlns=ns_svg)
    return root.svg() + '\n'
