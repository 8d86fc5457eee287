"""Command line interface: ``cellmorph <command> ...``.

Commands
--------
train       cross-validate and/or train a model on a feature file
predict     print the predicted class of every row of a feature file
genfeature  extract descriptors from images into a feature file
stats       image counts and sizes of a directory-per-class image set
tolibsvm    dump a feature file in sparse libsvm format
synth       write a synthetic labeled texture image set
"""

import argparse
import os
import sys
import warnings

import numpy as np
from joblib import Parallel, delayed
from PIL import Image

from .descriptors import extract_all, feature_layout
from .evaluation import ConfusionMatrix, SCALE_MODES, apply_simplified_problem, cross_validate
from .featurefile import UNLABELED, FeatureSet, read_features, sparse_line, write_features
from .imagecore import load_image
from .svm import KernelSpec, TrainConfig, load_model, save_model
from .synthetic import texture_dataset, write_dataset

KERNEL_CODES = {1: "linear", 2: "polynomial", 3: "rbf", 4: "mlp"}
RESERVED_KERNEL_CODES = (5, 6, 7)
KERNEL_PARAM_NAMES = {"linear": None, "polynomial": "degree", "rbf": "sigma2", "mlp": "mlp_bias"}
IMAGE_EXTENSIONS = (".png", ".jpg", ".jpeg", ".bmp", ".ppm", ".pgm", ".tif", ".tiff", ".gif")


class CommandError(Exception):
    """Failure that should end the command with a message and exit code 1."""


def _fail(msg):
    raise CommandError(msg)


# ---------------------------------------------------------------- train

def kernel_list():
    lines = ["available kernels (-k):", "  0  list kernels and exit"]
    for code, name in KERNEL_CODES.items():
        param = KERNEL_PARAM_NAMES[name]
        lines.append(f"  {code}  {name}" + (f" (-p sets {param})" if param else " (no -p)"))
    lines.append("  5-7  reserved, not implemented")
    return "\n".join(lines)


def kernel_from_args(code, param):
    if code in RESERVED_KERNEL_CODES:
        _fail(f"kernel code {code} is reserved and not implemented; see -k 0")
    if code not in KERNEL_CODES:
        _fail(f"unknown kernel code {code}; see -k 0")
    kind = KERNEL_CODES[code]
    if param is None:
        return KernelSpec(kind)
    if kind == "linear":
        warnings.warn("-p is ignored for the linear kernel", stacklevel=2)
        return KernelSpec(kind)
    if kind == "polynomial":
        if param != int(param):
            _fail(f"polynomial degree must be an integer, got {param}")
        return KernelSpec(kind, degree=int(param))
    if kind == "rbf":
        return KernelSpec(kind, sigma2=param)
    return KernelSpec(kind, mlp_bias=param)


def _evaluate_model(model, scale, fs):
    X = fs.X if scale is None else scale.transform(fs.X)
    guessed = model.predict(X)
    classes = sorted(set(model.classes) | set(int(c) for c in fs.labels))
    cm = ConfusionMatrix(classes)
    cm.add(fs.labels, guessed)
    return cm


def cmd_train(args):
    if args.kernel == 0:
        print(kernel_list())
        return 0
    if args.dataset is None:
        _fail("a dataset is required (-d FEATURES.feat)")
    fs = read_features(args.dataset)
    if np.any(fs.labels == UNLABELED):
        _fail(f"{args.dataset} contains unlabeled rows")

    if args.load is not None:
        model, scale = load_model(args.load)
        if model.n_features != fs.arity:
            _fail(f"model expects {model.n_features} features, {args.dataset} has {fs.arity}")
        cm = _evaluate_model(model, scale, fs)
        error = 100.0 * cm.n_errors / cm.total if cm.total else 0.0
        print(f"test error: {error:.4f}%")
        for t, g, n in cm.off_diagonal():
            print(f"  {t} {g} {n}")
        if args.output:
            save_model(args.output, model, scale)
        return 0

    spec = kernel_from_args(args.kernel, args.param)
    cfg = TrainConfig(C=args.C, gap_tol=args.gap_tol, terminator=args.terminator,
                      max_epochs=args.max_epochs)
    view = fs.to_view()
    if args.simplified:
        view = apply_simplified_problem(view)
    report = cross_validate(view, spec, cfg, args.folds, args.seed, args.scale)
    sys.stdout.write(report.to_text())
    if args.report:
        with open(args.report, "w", encoding="ascii") as fh:
            fh.write(report.to_json())
    if args.output:
        # Only the last fold's model is kept.
        save_model(args.output, report.models[-1], report.scales[-1])
    return 0


def _train_parser(sub):
    p = sub.add_parser("train", help="cross-validate and/or train a model",
                       description="Train or test a one-against-rest SVM on a feature file.")
    p.add_argument("-d", dest="dataset", metavar="FEATURES.feat", help="labeled feature file")
    p.add_argument("-l", dest="load", metavar="MODEL.model",
                   help="test this model on the dataset instead of training")
    p.add_argument("-f", dest="folds", type=int, default=2, metavar="N_FOLDS",
                   help="number of cross-validation folds; 1 trains and tests on all data")
    p.add_argument("-k", dest="kernel", type=int, default=3, metavar="KERN",
                   help="kernel code; 0 lists them")
    p.add_argument("-p", dest="param", type=float, metavar="KERN_PARAM",
                   help="degree (polynomial), sigma^2 (rbf) or bias (mlp)")
    p.add_argument("-C", dest="C", type=float, default=1.0, help="box constraint (default 1)")
    p.add_argument("-g", dest="gap_tol", type=float, default=1e-3, metavar="GAP_TOL",
                   help="relative feasibility gap tolerance (default 1e-3)")
    p.add_argument("-m", dest="terminator", type=int, default=3, choices=(1, 2, 3), metavar="TERM",
                   help="stopping bit mask: 1 gap, 2 KKT, 3 both (default)")
    p.add_argument("-o", dest="output", metavar="MODEL.model", help="save the (last fold's) model")
    p.add_argument("--max-epochs", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0, help="fold shuffle seed")
    p.add_argument("--scale", choices=SCALE_MODES, default="train",
                   help="fit [-1, 1] scaling per training split, on all data, or not at all")
    p.add_argument("--simplified", action="store_true",
                   help="remove and merge classes as in the reduced cell problem")
    p.add_argument("--report", metavar="REPORT.json", help="write the report as JSON")
    p.set_defaults(func=cmd_train)
    return p


# -------------------------------------------------------------- predict

def cmd_predict(args):
    model, scale = load_model(args.load)
    fs = read_features(args.features)
    if len(fs) == 0:
        return 0
    if fs.arity != model.n_features:
        _fail(f"model expects {model.n_features} features, {args.features} has {fs.arity}")
    X = fs.X if scale is None else scale.transform(fs.X)
    for c in model.predict(X):
        print(int(c))
    return 0


def _predict_parser(sub):
    p = sub.add_parser("predict", help="predict the class of every row", add_help=False,
                       description="Print one predicted class id per feature row, in input order.")
    p.add_argument("-?", "-h", "--help", action="help", help="show this help and exit")
    p.add_argument("-l", dest="load", required=True, metavar="MODEL.model")
    p.add_argument("-f", dest="features", required=True, metavar="FEATURES.feat")
    p.set_defaults(func=cmd_predict)
    return p


# ----------------------------------------------------------- genfeature

class _ImageAction(argparse.Action):
    def __call__(self, parser, namespace, values, option_string=None):
        images = getattr(namespace, self.dest) or []
        images.append({"path": values})
        setattr(namespace, self.dest, images)


class _CropAction(argparse.Action):
    def __call__(self, parser, namespace, values, option_string=None):
        images = getattr(namespace, "images") or []
        if not images:
            parser.error(f"{option_string} must follow an -i IMAGE")
        images[-1][self.dest] = values


def _crop_box(entry):
    keys = ("left", "top", "width", "height")
    given = [k for k in keys if k in entry]
    if not given:
        return None
    if len(given) != 4:
        _fail(f"{entry['path']}: a crop needs all of -x -y -w -h")
    return tuple(entry[k] for k in keys)


def list_labeled_images(root):
    """``(path, label)`` for every image in ``root/<integer label>/``, sorted."""
    if not os.path.isdir(root):
        _fail(f"{root} is not a directory")
    items = []
    for name in sorted(os.listdir(root)):
        folder = os.path.join(root, name)
        try:
            label = int(name)
        except ValueError:
            continue
        if not os.path.isdir(folder):
            continue
        for fname in sorted(os.listdir(folder)):
            if fname.lower().endswith(IMAGE_EXTENSIONS):
                items.append((os.path.join(folder, fname), label))
    return items


def _features_of(path, box):
    try:
        img = load_image(path)
    except (OSError, ValueError) as exc:
        raise CommandError(f"{path}: cannot decode image ({exc})") from exc
    if box is not None:
        try:
            img = img.crop(*box)
        except ValueError as exc:
            raise CommandError(f"{path}: {exc}") from exc
    try:
        return extract_all(img).values
    except ValueError as exc:
        raise CommandError(f"{path}: {exc}") from exc


def cmd_genfeature(args):
    jobs = [(e["path"], args.label, _crop_box(e)) for e in args.images or []]
    if args.directory:
        jobs += [(p, label, None) for p, label in list_labeled_images(args.directory)]
    if not jobs:
        _fail("no input images (use -i IMAGE or -D DIR)")
    values = Parallel(n_jobs=args.jobs)(delayed(_features_of)(p, box) for p, _, box in jobs)
    fs = FeatureSet.from_rows(
        ((i, label, v) for i, ((_, label, _), v) in enumerate(zip(jobs, values))),
        layout=feature_layout())
    write_features(args.output, fs)
    return 0


def _genfeature_parser(sub):
    p = sub.add_parser("genfeature", help="extract descriptors from images", add_help=False,
                       description="Extract descriptors from images (optionally cropped) into "
                                   "a feature file. Crop flags apply to the preceding -i.")
    p.add_argument("-?", "--help", action="help", help="show this help and exit")
    p.add_argument("-i", dest="images", action=_ImageAction, metavar="IMAGE", help="input image")
    p.add_argument("-x", dest="left", type=int, action=_CropAction, help="crop left")
    p.add_argument("-y", dest="top", type=int, action=_CropAction, help="crop top")
    p.add_argument("-w", dest="width", type=int, action=_CropAction, help="crop width")
    p.add_argument("-h", dest="height", type=int, action=_CropAction, help="crop height")
    p.add_argument("-D", dest="directory", metavar="DIR",
                   help="also add every image of a directory-per-class tree, labeled by folder")
    p.add_argument("-L", dest="label", type=int, default=UNLABELED,
                   help="label for -i images (default -1, unlabeled)")
    p.add_argument("-o", dest="output", required=True, metavar="FEATURES.feat")
    p.add_argument("-j", dest="jobs", type=int, default=None, help="parallel workers")
    p.set_defaults(func=cmd_genfeature)
    return p


# ---------------------------------------------------------------- stats

def image_stats(root, class_id=-1):
    """Per-class ``{label: {"count", "width": (min, mean, max), "height": ...}}``.

    ``class_id`` -1 selects every class and adds an ``"all"`` entry.
    """
    sizes = {}
    for path, label in list_labeled_images(root):
        if class_id != -1 and label != class_id:
            continue
        try:
            with Image.open(path) as im:
                sizes.setdefault(label, []).append(im.size)
        except OSError as exc:
            raise CommandError(f"{path}: cannot read image ({exc})") from exc

    def summary(pairs):
        if not pairs:
            return {"count": 0, "width": None, "height": None}
        arr = np.array(pairs, dtype=float)
        return {"count": len(pairs),
                "width": (arr[:, 0].min(), arr[:, 0].mean(), arr[:, 0].max()),
                "height": (arr[:, 1].min(), arr[:, 1].mean(), arr[:, 1].max())}

    if class_id != -1:
        return {class_id: summary(sizes.get(class_id, []))}
    out = {label: summary(pairs) for label, pairs in sorted(sizes.items())}
    out["all"] = summary([s for pairs in sizes.values() for s in pairs])
    return out


def _fmt_range(r):
    return "-" if r is None else f"{r[0]:g}/{r[1]:.2f}/{r[2]:g}"


def cmd_stats(args):
    stats = image_stats(args.dir, args.cls)
    print("class\tcount\twidth min/mean/max\theight min/mean/max")
    for label, s in stats.items():
        print(f"{label}\t{s['count']}\t{_fmt_range(s['width'])}\t{_fmt_range(s['height'])}")
    return 0


def _stats_parser(sub):
    p = sub.add_parser("stats", help="count and size statistics of an image set",
                       description="Image counts and sizes per class; CLASS -1 selects all.")
    p.add_argument("cls", type=int, metavar="CLASS")
    p.add_argument("dir", metavar="DIR", help="directory with one sub-directory per class")
    p.set_defaults(func=cmd_stats)
    return p


# ------------------------------------------------------------- tolibsvm

def cmd_tolibsvm(args):
    fs = read_features(args.features)
    out = sys.stdout
    for label, row in zip(fs.labels, fs.X):
        out.write(sparse_line(label, row) + "\n")
    return 0


def _tolibsvm_parser(sub):
    p = sub.add_parser("tolibsvm", help="dump a feature file in libsvm format",
                       description="Write a feature file in sparse libsvm format to stdout.")
    p.add_argument("features", metavar="FEATURES.feat")
    p.set_defaults(func=cmd_tolibsvm)
    return p


# ---------------------------------------------------------------- synth

def cmd_synth(args):
    images, labels = texture_dataset(args.per_class, args.seed, args.size)
    write_dataset(args.dir, images, labels)
    print(f"wrote {len(images)} images to {args.dir}")
    return 0


def _synth_parser(sub):
    p = sub.add_parser("synth", help="write a synthetic labeled texture image set",
                       description="Flat color (0), checkerboard (1) and grating (2) images "
                                   "in a directory-per-class layout.")
    p.add_argument("dir", metavar="DIR")
    p.add_argument("--per-class", type=int, default=50)
    p.add_argument("--size", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)
    return p


def build_parser():
    parser = argparse.ArgumentParser(prog="cellmorph", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    parser.commands = {}
    for add in (_train_parser, _predict_parser, _genfeature_parser, _stats_parser,
                _tolibsvm_parser, _synth_parser):
        p = add(sub)
        parser.commands[p.prog.split()[-1]] = p
    return parser


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv:
        parser.print_usage(sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    if len(argv) == 1 and args.command != "stats":
        # A bare command prints its usage and counts as misuse.
        parser.commands[args.command].print_usage(sys.stderr)
        return 2
    try:
        return args.func(args)
    except (CommandError, OSError, ValueError) as exc:
        print(f"cellmorph {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
