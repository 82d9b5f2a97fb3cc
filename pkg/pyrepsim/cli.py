"""
Command line interface ``repsim``.

Exit codes: 0 on success, 2 for invalid input or usage, 3 for unreadable or
unwritable files, 4 for numerically degenerate inputs.
"""
import argparse
import json
import logging
import os
import sys

import numpy as np

from pyrepsim import analysis, defaults, synthgen
from pyrepsim.exceptions import DegenerateError, MatrixIOError, ValidationError
from pyrepsim.indexes import SimilarityIndexSpec, all_indexes
from pyrepsim.reprdata import center_columns, load_matrix, save_matrix
from pyrepsim.util import report_io
from pyrepsim.util.matrix_io import EXTENSIONS

logger = logging.getLogger(__name__)

MANIFEST = "manifest.json"

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_DEGENERATE = 4


def index_spec_from_args(args):
    return SimilarityIndexSpec(args.index,
                               bandwidth_fraction=args.bandwidth_fraction,
                               variance_threshold=args.variance_threshold,
                               kappa_x=args.kappa_x,
                               kappa_y=args.kappa_y,
                               normalization=args.normalization,
                               direction=args.direction)


def list_layer_files(directory):
    """
    Layer files of a directory in layer order: the "layers" list of its
    manifest.json if there is one, else every matrix file in lexicographic order.
    """
    if not os.path.isdir(directory):
        raise ValidationError("%s is not a directory" % directory)

    manifest = os.path.join(directory, MANIFEST)
    if os.path.exists(manifest):
        with open(manifest) as fh:
            try:
                layers = json.load(fh).get("layers")
            except ValueError as e:
                raise MatrixIOError("%s: invalid manifest (%s)" % (manifest, e))
        if layers is not None:
            if not layers:
                raise ValidationError("%s lists no layers" % manifest)
            return [os.path.join(directory, name) for name in layers]

    files = sorted(name for name in os.listdir(directory)
                   if os.path.splitext(name)[1].lower() in EXTENSIONS)
    if not files:
        raise ValidationError("no layer files in %s" % directory)
    return [os.path.join(directory, name) for name in files]


def load_layers(directory):
    layers = [load_matrix(path) for path in list_layer_files(directory)]
    logger.info("loaded %d layers from %s", len(layers), directory)
    return layers


def cmd_compare(args):
    spec = index_spec_from_args(args)
    index = spec.build(args.rank_tol)
    X = load_matrix(args.file_a)
    Y = load_matrix(args.file_b)
    score = index(X, Y)

    if args.format == "csv":
        return report_io.rows_to_csv([["index", "value"], [spec.name, report_io.format_float(score.value)]])
    return report_io.dumps({"index": spec.name,
                            "params": spec.params,
                            "rank_tol": args.rank_tol,
                            "value": score.value,
                            "normalized": score.normalized,
                            "metadata": dict(score.metadata),
                            "files": [args.file_a, args.file_b]}) + "\n"


def cmd_matrix(args):
    spec = index_spec_from_args(args)
    report = analysis.similarity_matrix(load_layers(args.dir_a), load_layers(args.dir_b), spec,
                                        n_threads=args.threads, rank_tol=args.rank_tol)
    if args.symmetrize:
        report = analysis.symmetrize(report)

    if args.format == "csv":
        return analysis.report_to_csv(report)
    return analysis.report_to_json(report) + "\n"


def cmd_sanity_check(args):
    if len(args.dirs) < 2:
        raise ValidationError("sanity-check needs at least 2 network directories, got %d" % len(args.dirs))
    spec = index_spec_from_args(args)
    networks = [load_layers(directory) for directory in args.dirs]
    report = analysis.aggregate_correspondence(networks, spec, exclude_labels=args.exclude or (),
                                               n_threads=args.threads, rank_tol=args.rank_tol)
    report.metadata["dirs"] = list(args.dirs)

    if args.format == "csv":
        se = "" if report.jackknife_se is None else report_io.format_float(report.jackknife_se)
        return report_io.rows_to_csv([["index", "accuracy", "jackknife_se"],
                                      [spec.name, report_io.format_float(report.accuracy), se]])
    return analysis.correspondence_report_to_json(report) + "\n"


def cmd_spectrum(args):
    X = center_columns(load_matrix(args.file_a))
    Y = center_columns(load_matrix(args.file_b))
    report = analysis.shared_subspace_spectrum(X, Y, args.components, rank_tol=args.rank_tol)
    report.metadata["files"] = [args.file_a, args.file_b]

    if args.format == "csv":
        rows = [["component", "own_scaling", "cross_scaling", "cosine"]]
        for i, values in enumerate(zip(report.own_scaling, report.cross_scaling, report.cosine)):
            rows.append([str(i)] + [report_io.format_float(v) for v in values])
        return report_io.rows_to_csv(rows)
    return analysis.spectrum_report_to_json(report) + "\n"


def _parse_indices(text):
    if not text:
        return ()
    try:
        return tuple(int(token) for token in text.split(","))
    except ValueError:
        raise ValidationError("shared indices must be a comma separated list of integers, got %r" % text)


def _write_layers(directory, matrices, names, manifest):
    os.makedirs(directory, exist_ok=True)
    for X, name in zip(matrices, names):
        save_matrix(X, os.path.join(directory, name), "rsm-binary")
    manifest = dict(manifest, layers=list(names))
    with open(os.path.join(directory, MANIFEST), "w") as fh:
        fh.write(report_io.dumps(manifest) + "\n")
    return manifest


def cmd_gen(args):
    if args.out is None:
        raise ValidationError("gen needs an output directory (--out)")
    n, p, seed = args.n, args.p, args.seed
    params = {"kind": args.kind, "n": n, "p": p, "seed": seed}

    if args.kind == "random":
        X = synthgen.gen_random(n, p, seed)
        manifest = _write_layers(args.out, [X], ["x.rsm"], params)

    elif args.kind == "relation":
        relation = synthgen.Relation(kind=args.relation, alpha=args.alpha)
        if relation.kind == "shared-subspace":
            raise ValidationError("use --kind shared-subspace for the shared-subspace relation")
        X = synthgen.gen_random(n, p, seed)
        Y = synthgen.apply_relation(X, relation, seed)
        params.update(relation=relation.kind, alpha=relation.alpha,
                      condition_number=Y.metadata.get("condition_number"))
        manifest = _write_layers(args.out, [X, Y], ["x.rsm", "y.rsm"], params)

    elif args.kind == "shared-subspace":
        relation = synthgen.Relation(kind="shared-subspace", shared_indices=_parse_indices(args.shared_indices),
                                     spectrum_decay=args.spectrum_decay, noise_level=args.noise_level or 0.)
        X, Y = synthgen.gen_shared_subspace_pair(synthgen.SynthSpec(n, p, seed, relation))
        params.update(shared_indices=list(relation.shared_indices), spectrum_decay=relation.spectrum_decay,
                      noise_level=relation.noise_level, eigenvalues=X.metadata["eigenvalues"])
        manifest = _write_layers(args.out, [X, Y], ["x.rsm", "y.rsm"], params)

    else:
        noise_level = defaults.NOISE_LEVEL if args.noise_level is None else args.noise_level
        params.update(layers=args.layers, networks=args.networks, noise_level=noise_level,
                      structure_seed=args.structure_seed, signal_rank=args.signal_rank)
        if args.networks < 1:
            raise ValidationError("--networks must be positive, got %d" % args.networks)
        networks = []
        for k in range(args.networks):
            stack = synthgen.gen_layer_stack(args.layers, n, p, seed + k, noise_level=noise_level,
                                             structure_seed=args.structure_seed, signal_rank=args.signal_rank)
            name = "net_%d" % k
            _write_layers(os.path.join(args.out, name), stack, ["%s.rsm" % X.label for X in stack],
                          dict(params, network_seed=seed + k))
            networks.append(name)
        manifest = dict(params, network_dirs=networks)
        with open(os.path.join(args.out, MANIFEST), "w") as fh:
            fh.write(report_io.dumps(manifest) + "\n")

    logger.info("wrote %s to %s", args.kind, args.out)
    return report_io.dumps(manifest) + "\n"


def _common_parser():
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--index", default="cka-linear", choices=sorted(all_indexes),
                        help="similarity index (default: cka-linear)")
    parser.add_argument("--format", default="json", choices=("json", "csv"))
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--rank-tol", type=float, default=defaults.RANK_TOL,
                        help="relative singular value threshold (default: %(default)g)")
    parser.add_argument("--exclude", action="append", metavar="LABEL",
                        help="layer label left out of the sanity check; may be repeated")
    parser.add_argument("-v", "--verbose", action="count", default=0)

    group = parser.add_argument_group("index parameters")
    group.add_argument("--bandwidth-fraction", type=float,
                       help="RBF bandwidth as a fraction of the median distance; usual choices are %s "
                            "(default: %g)" % (", ".join("%g" % f for f in defaults.RBF_BANDWIDTH_PRESETS),
                                               defaults.DEFAULT_BANDWIDTH_FRACTION))
    group.add_argument("--variance-threshold", type=float,
                       help="SVCCA retained variance (default: %g)" % defaults.SVCCA_THRESHOLD)
    group.add_argument("--kappa-x", type=float)
    group.add_argument("--kappa-y", type=float)
    group.add_argument("--normalization", choices=defaults.RIDGE_NORMALIZATIONS)
    group.add_argument("--direction", choices=defaults.DIRECTIONS)
    return parser


def build_parser():
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="repsim", description="Representational similarity of network layers")
    subparsers = parser.add_subparsers(dest="command", metavar="command")
    subparsers.required = True

    p = subparsers.add_parser("compare", parents=[common], help="compare two activation matrices")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.set_defaults(func=cmd_compare)

    p = subparsers.add_parser("matrix", parents=[common], help="similarity grid between two layer directories")
    p.add_argument("dir_a")
    p.add_argument("dir_b")
    p.add_argument("--symmetrize", action="store_true", help="emit S + S^T")
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_matrix)

    p = subparsers.add_parser("sanity-check", parents=[common],
                              help="corresponding-layer accuracy over network directories")
    p.add_argument("dirs", nargs="+")
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_sanity_check)

    p = subparsers.add_parser("spectrum", parents=[common],
                              help="action of the second Gram matrix on the eigenvectors of the first")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--components", type=int)
    p.set_defaults(func=cmd_spectrum)

    p = subparsers.add_parser("gen", parents=[common], help="write synthetic activations")
    p.add_argument("--kind", default="random", choices=("random", "relation", "shared-subspace", "layer-stack"))
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--p", type=int, default=16)
    p.add_argument("--relation", default="orthogonal-transform",
                   choices=[r for r in synthgen.RELATIONS if r != "shared-subspace"])
    p.add_argument("--alpha", type=float, default=1.)
    p.add_argument("--shared-indices", default="", help="comma separated component indices")
    p.add_argument("--spectrum-decay", type=float, default=defaults.SPECTRUM_DECAY)
    p.add_argument("--noise-level", type=float)
    p.add_argument("--layers", type=int, default=8)
    p.add_argument("--networks", type=int, default=1)
    p.add_argument("--structure-seed", type=int, default=0)
    p.add_argument("--signal-rank", type=int, default=defaults.SIGNAL_RANK)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)
    return parser


def _configure_logging(verbosity):
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code
    _configure_logging(args.verbose)

    try:
        output = args.func(args)
    except ValidationError as e:
        print("repsim: error: %s" % e, file=sys.stderr)
        return EXIT_VALIDATION
    except (MatrixIOError, OSError) as e:
        print("repsim: error: %s" % e, file=sys.stderr)
        return EXIT_IO
    except (DegenerateError, np.linalg.LinAlgError) as e:
        print("repsim: error: %s" % e, file=sys.stderr)
        return EXIT_DEGENERATE

    sys.stdout.write(output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
