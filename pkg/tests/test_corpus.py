import pytest

from app.core.errors import ToolkitError
from app.database import SessionLocal
from app.database.init_db import init_database
from app.models.models import AuditRecord
from app.scripts.run_corpus import (
    MAX_DEG_X,
    MAX_DEG_Y,
    automorphic_pairs,
    main,
    random_pairs,
    run_corpus,
)
from app.utils.data_loader import load_bindings_from_file, load_pairs_from_csv, save_pairs_to_csv


def test_random_pairs_are_seeded():
    first = random_pairs(7, 10)
    second = random_pairs(7, 10)
    assert [(n, str(f), str(g)) for n, f, g in first] == [(n, str(f), str(g)) for n, f, g in second]


def test_random_pairs_respect_shape():
    for name, f, g in random_pairs(20240607, 40):
        ny_f, ny_g = int(f.degree("y")), int(g.degree("y"))
        assert 1 <= ny_f <= MAX_DEG_Y and 1 <= ny_g <= MAX_DEG_Y, name
        assert f.degree("x") <= MAX_DEG_X and g.degree("x") <= MAX_DEG_X, name
        assert f.leading_coefficient_in("y").is_constant(), name


def test_random_pairs_cover_high_degree_products():
    shapes = {(int(f.degree("y")), int(g.degree("y"))) for _, f, g in random_pairs(20240607, 40)}
    assert any(ny_f * ny_g > 12 for ny_f, ny_g in shapes)


def test_run_corpus_on_automorphisms():
    df = run_corpus(automorphic_pairs(), workers=2)
    assert list(df["name"]) == [name for name, _, _ in automorphic_pairs()]
    assert df["error"].isna().all()
    assert df["jacobian_pair"].all()
    assert df["verified"].all()
    assert (df["extension_degree"] == 1).all()


def test_run_corpus_saves_records():
    init_database()
    db = SessionLocal()
    try:
        before = db.query(AuditRecord).count()
        run_corpus(automorphic_pairs()[:2], workers=1, db=db)
        assert db.query(AuditRecord).count() == before + 2
        record = db.query(AuditRecord).filter(AuditRecord.name == "auto-2").first()
        assert record.report["dependence"]["P"] == "G - F^3 + x"
    finally:
        db.close()


def test_main_writes_summary(tmp_path):
    pairs_csv = tmp_path / "pairs.csv"
    save_pairs_to_csv(automorphic_pairs(), str(pairs_csv))
    output = tmp_path / "summary.csv"
    code = main(["--input", str(pairs_csv), "--output", str(output), "--no-db", "--workers", "1"])
    assert code == 0
    assert output.exists()
    assert "auto-5" in output.read_text(encoding="utf-8")


def test_csv_round_trip(tmp_path):
    path = tmp_path / "pairs.csv"
    save_pairs_to_csv(automorphic_pairs(), str(path))
    loaded = load_pairs_from_csv(str(path))
    assert loaded == automorphic_pairs()


def test_csv_missing_columns(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("name,f\na,x\n", encoding="utf-8")
    with pytest.raises(ToolkitError, match="g"):
        load_pairs_from_csv(str(path))


def test_bindings_reject_malformed_line(tmp_path):
    path = tmp_path / "bindings.txt"
    path.write_text("f x + y\n", encoding="utf-8")
    with pytest.raises(ToolkitError, match="expected 'name = poly'"):
        load_bindings_from_file(str(path))
