import numpy as np
import pytest
from conftest import three_clusters
from PIL import Image

from cellmorph.cli import main
from cellmorph.featurefile import FeatureSet, read_features, write_features
from cellmorph.synthetic import texture_dataset, write_dataset


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def clusters_file(tmp_path, rng):
    X, y = three_clusters(rng)
    path = tmp_path / "clusters.feat"
    write_features(str(path), FeatureSet(np.arange(len(y)), y, X, (("xy", 2),)))
    return path


@pytest.fixture
def image_dir(tmp_path):
    images, labels = texture_dataset(n_per_class=2, seed=3, size=32)
    root = tmp_path / "images"
    write_dataset(str(root), images, labels)
    return root


def test_no_arguments_is_misuse(capsys):
    assert run(capsys)[0] == 2


@pytest.mark.parametrize("argv", [["--help"], ["train", "--help"], ["predict", "-?"],
                                  ["genfeature", "-?"], ["stats", "--help"]])
def test_help_exits_zero(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert "usage" in out


@pytest.mark.parametrize("argv", [["train"], ["predict"], ["genfeature"], ["bogus"],
                                  ["train", "-m", "4", "-d", "x"], ["train", "-f", "two"]])
def test_misuse_is_nonzero(capsys, argv):
    assert run(capsys, *argv)[0] != 0


def test_kernel_list(capsys):
    code, out, _ = run(capsys, "train", "-k", "0")
    assert code == 0
    assert "rbf" in out


def test_reserved_kernel_code(capsys, clusters_file):
    code, _, err = run(capsys, "train", "-d", clusters_file, "-k", "5")
    assert code == 1
    assert "error" in err


def test_train_predict_round_trip(capsys, clusters_file, tmp_path):
    model = tmp_path / "m.model"
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "train", "-d", clusters_file, "-k", "3", "-p", "1", "-C", "10",
                       "-f", "3", "-o", model, "--report", report)
    assert code == 0
    assert "total error: 0.0000%" in out
    assert model.exists() and report.exists()

    code, out, _ = run(capsys, "predict", "-l", model, "-f", clusters_file)
    assert code == 0
    predicted = [int(v) for v in out.split()]
    assert predicted == list(read_features(str(clusters_file)).labels)

    code, out, _ = run(capsys, "train", "-d", clusters_file, "-l", model)
    assert code == 0
    assert "test error: 0.0000%" in out


def test_train_with_kkt_terminator(capsys, clusters_file):
    code, out, _ = run(capsys, "train", "-d", clusters_file, "-k", "3", "-p", "1", "-C", "10",
                       "-m", "2")
    assert code == 0
    assert "terminator=2" in out


def test_predict_edge_cases(capsys, clusters_file, tmp_path):
    model = tmp_path / "m.model"
    run(capsys, "train", "-d", clusters_file, "-C", "10", "-k", "1", "-o", model)
    empty = tmp_path / "empty.feat"
    write_features(str(empty), FeatureSet(np.zeros(0, int), np.zeros(0, int), np.zeros((0, 2))))
    code, out, _ = run(capsys, "predict", "-l", model, "-f", empty)
    assert code == 0 and out == ""
    wide = tmp_path / "wide.feat"
    write_features(str(wide), FeatureSet(np.arange(2), np.array([-1, -1]), np.zeros((2, 3))))
    code, _, err = run(capsys, "predict", "-l", model, "-f", wide)
    assert code == 1
    assert "expects 2 features" in err


def test_missing_file_is_reported(capsys, tmp_path):
    code, _, err = run(capsys, "predict", "-l", tmp_path / "none.model", "-f", tmp_path / "x")
    assert code == 1
    assert "error" in err


def test_genfeature_crop_equals_precropped_image(capsys, tmp_path, image_dir):
    src = next((image_dir / "1").iterdir())
    Image.open(src).crop((4, 6, 4 + 20, 6 + 18)).save(tmp_path / "pre.png")
    cropped, pre = tmp_path / "a.feat", tmp_path / "b.feat"
    assert run(capsys, "genfeature", "-i", src, "-x", 4, "-y", 6, "-w", 20, "-h", 18,
               "-o", cropped)[0] == 0
    assert run(capsys, "genfeature", "-i", tmp_path / "pre.png", "-o", pre)[0] == 0
    assert np.array_equal(read_features(str(cropped)).X, read_features(str(pre)).X)


def test_genfeature_two_images_two_rows(capsys, tmp_path, image_dir):
    a, b = sorted((image_dir / "0").iterdir())
    out = tmp_path / "two.feat"
    assert run(capsys, "genfeature", "-i", a, "-i", b, "-L", 4, "-o", out)[0] == 0
    fs = read_features(str(out))
    assert len(fs) == 2
    assert list(fs.labels) == [4, 4]


def test_genfeature_directory_and_determinism(capsys, tmp_path, image_dir):
    first, second = tmp_path / "a.feat", tmp_path / "b.feat"
    assert run(capsys, "genfeature", "-D", image_dir, "-o", first)[0] == 0
    assert run(capsys, "genfeature", "-D", image_dir, "-o", second, "-j", 2)[0] == 0
    assert first.read_bytes() == second.read_bytes()
    assert sorted(read_features(str(first)).labels) == [0, 0, 1, 1, 2, 2]


def test_genfeature_bad_crop(capsys, tmp_path, image_dir):
    src = next((image_dir / "0").iterdir())
    code, _, err = run(capsys, "genfeature", "-i", src, "-x", 30, "-w", 10,
                       "-o", tmp_path / "x.feat")
    assert code == 1


def test_stats(capsys, image_dir):
    code, out, _ = run(capsys, "stats", -1, image_dir)
    assert code == 0
    rows = {line.split("\t")[0]: line.split("\t") for line in out.strip().splitlines()[1:]}
    assert [rows[c][1] for c in ("0", "1", "2")] == ["2", "2", "2"]
    assert rows["all"][1] == "6"
    code, out, _ = run(capsys, "stats", 1, image_dir)
    assert out.strip().splitlines()[1].split("\t")[:2] == ["1", "2"]


def test_tolibsvm(capsys, tmp_path):
    path = tmp_path / "s.feat"
    write_features(str(path), FeatureSet(np.arange(2), np.array([3, 1]),
                                         np.array([[0, 2.5, 0, -1], [0, 0, 0, 0.0]])))
    code, out, _ = run(capsys, "tolibsvm", path)
    assert code == 0
    assert out == "3 2:2.5 4:-1\n1\n"


def test_train_output_is_reproducible(capsys, clusters_file, tmp_path):
    outputs = []
    for name in ("a", "b"):
        code, out, _ = run(capsys, "train", "-d", clusters_file, "-C", "1", "-f", "3",
                           "--seed", "9", "-o", tmp_path / f"{name}.model")
        outputs.append(out)
    assert outputs[0] == outputs[1]
    assert (tmp_path / "a.model").read_bytes() == (tmp_path / "b.model").read_bytes()


def test_synth_writes_class_directories(capsys, tmp_path):
    code, out, _ = run(capsys, "synth", tmp_path / "s", "--per-class", 1, "--size", 16)
    assert code == 0
    assert sorted(p.name for p in (tmp_path / "s").iterdir()) == ["0", "1", "2"]
