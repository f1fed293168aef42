"""Pictures of the symmetrised polytope and of visibility tables."""
import argparse
import logging
import os

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt  # noqa: E402

from symbell.symcorr import ScenarioParams, ghz_reduced, weighted_dot  # noqa: E402
from symbell.sympoly import enumerate_facets, enumerate_sym_vertices, extreme_points  # noqa: E402

logger = logging.getLogger(__name__)


def polytope_visibility(facets, r):
    """Largest v with v * r inside every facet."""
    ratios = [float(L) / weighted_dot(f, r) for f, L in facets if weighted_dot(f, r) > 0]
    return min(ratios) if ratios else 1.0


def plot_polytope(params, filename):
    """Draw the symmetrised polytope of a two-dimensional scenario.

    :param params: ScenarioParams with ceil(m/2) = 2
    :param filename: where to save the figure
    :return: the filename of the saved plot
    """
    if params.dim != 2:
        raise ValueError("can only draw two-dimensional polytopes, {} has dimension {}".format(
            params, params.dim))
    vset = enumerate_sym_vertices(params)
    extreme = extreme_points(vset)
    facets = enumerate_facets(vset)
    r = ghz_reduced(params)
    v = polytope_visibility(facets, r)

    fig, ax = plt.subplots()
    ax.scatter([float(p[0]) for p in vset], [float(p[1]) for p in vset], color='grey', s=12,
               label='projected strategies')
    ax.scatter([float(p[0]) for p in extreme], [float(p[1]) for p in extreme], color='black', s=30,
               label='extreme points')
    for f, L in facets:
        tight = sorted(p.entries for p in extreme if weighted_dot(f, p) == L)
        if len(tight) < 2:
            continue
        ax.plot([float(tight[0][0]), float(tight[-1][0])], [float(tight[0][1]), float(tight[-1][1])],
                color='blue', linewidth=1)
    ax.plot([0, r[0]], [0, r[1]], color='red', linestyle='--', linewidth=1)
    ax.scatter([r[0]], [r[1]], color='red', marker='*', s=80, label='GHZ')
    ax.scatter([v * r[0]], [v * r[1]], color='red', s=30, label='v = {:.5f}'.format(v))

    plt.title('Symmetrised local polytope, {}'.format(params))
    plt.xlabel('class 0')
    plt.ylabel('class 1')
    plt.legend()
    ax.set_aspect('equal', adjustable='datalim')

    dirname = os.path.dirname(filename)
    if dirname:
        os.makedirs(dirname, exist_ok=True)
    plt.savefig(filename)
    plt.close(fig)
    logger.info("saved polytope of %s to %s", params, filename)
    return filename


def plot_visibilities(table, filename):
    """Visibility against m, one line per number of parties.

    :param table: rows (N, m, v)
    :param filename: where to save the figure
    :return: the filename of the saved plot
    """
    curves = {}
    for n, m, v in table:
        curves.setdefault(n, []).append((m, v))
    fig, ax = plt.subplots()
    for n in sorted(curves):
        points = sorted(curves[n])
        ax.plot([p[0] for p in points], [p[1] for p in points], marker='o', label='N = {}'.format(n))
    ax.set_yscale('log')
    plt.title('Critical visibility of the GHZ state')
    plt.xlabel('inputs per party m')
    plt.ylabel('visibility')
    plt.legend(fontsize='small')

    dirname = os.path.dirname(filename)
    if dirname:
        os.makedirs(dirname, exist_ok=True)
    plt.savefig(filename)
    plt.close(fig)
    return filename


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description='Draw the symmetrised polytope of a D = 2 scenario.')
    parser.add_argument('-N', type=int, default=2, help="Number of parties.")
    parser.add_argument('-m', type=int, default=3, help="Number of inputs per party.")
    parser.add_argument('-o', '--output', default='polytope.png', help="Output image.")
    args = parser.parse_args()
    plot_polytope(ScenarioParams(args.N, args.m), args.output)
