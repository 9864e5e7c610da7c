import copy
import json

import pytest

from wallspace.complex_core import (SpecError, base_links, parse_complex_spec, quotient_vertices,
                                    serialize_spec, validate_geometry, vertex_index)
from wallspace.linkgraph import check_cat0_link, is_fano_incidence

from conftest import fixture_path


@pytest.fixture
def torus_doc():
    with open(fixture_path("flat_torus.complex")) as fh:
        return json.load(fh)


def parse(doc):
    return parse_complex_spec(json.dumps(doc))


def test_v_bowtie_cell_counts(vspec):
    kinds = [f.kind for f in vspec.faces]
    assert (kinds.count("triangle"), kinds.count("rhombus"), kinds.count("bowtie")) == (4, 3, 6)
    assert len(vspec.edges) == 20
    rep = validate_geometry(vspec)
    assert rep.ok and rep.quotient_vertex_count == 8
    assert rep.euler_characteristic == 1
    assert max(rep.closure_residuals.values()) < 1e-12


def test_flat_torus_counts(tspec):
    rep = validate_geometry(tspec)
    assert (rep.quotient_vertex_count, rep.quotient_edge_count, rep.quotient_face_count) == (1, 3, 2)
    assert rep.euler_characteristic == 0


def test_bad_angle_sum(torus_doc):
    torus_doc["shapes"][0]["corners"][0] = [1, 2]
    with pytest.raises(SpecError, match="angle-sum") as ei:
        parse(torus_doc)
    assert ei.value.position == "shapes[0]"


def test_syntax_error_has_line_and_column():
    with pytest.raises(SpecError) as ei:
        parse_complex_spec('{\n "shapes": [,\n]}')
    assert "line 2" in ei.value.position


def test_unknown_edge(torus_doc):
    torus_doc["faces"][0]["boundary"][0][0] = "z"
    with pytest.raises(SpecError, match="unknown edge"):
        parse(torus_doc)


def test_unicode_minus_accepted(torus_doc):
    torus_doc["faces"][1]["boundary"] = [["a", "−"], ["c", "-"], ["b", "-"]]
    spec = parse(torus_doc)
    assert [s for _, s in spec.faces[1].boundary] == [-1, -1, -1]


def test_mismatched_lengths(torus_doc):
    torus_doc["shapes"].append({"name": "big", "sides": [2, 2, 2], "corners": [[1, 3]] * 3})
    torus_doc["faces"][1]["shape"] = "big"
    with pytest.raises(SpecError, match="mismatched"):
        parse(torus_doc)


def test_footprint_missing_face(torus_doc):
    torus_doc["walls"]["a"][0]["face"] = 7
    with pytest.raises(SpecError, match="missing face"):
        parse(torus_doc)


def test_only_rhombi_are_cells(torus_doc):
    torus_doc["walls"]["a"][0]["cell"] = True
    with pytest.raises(SpecError, match="rhombi"):
        parse(torus_doc)


def test_roundtrip(vspec, tspec):
    for spec in (vspec, tspec):
        again = parse_complex_spec(serialize_spec(spec))
        assert serialize_spec(again) == serialize_spec(spec)
        assert again.faces == spec.faces


def test_vertex_names(vspec):
    qv = quotient_vertices(vspec)
    assert qv.names == ("v", "vbar", "mP0", "mP1", "mP2", "mQ0", "mQ1", "mQ2")
    assert vertex_index(vspec, "vbar") == 1 == vertex_index(vspec, "v1") == vertex_index(vspec, 1)
    with pytest.raises(SpecError):
        vertex_index(vspec, "nowhere")


def test_quotient_links(vspec, tspec):
    links = base_links(vspec)
    assert is_fano_incidence(links[0]) and is_fano_incidence(links[1])
    for v, link in links.items():
        assert check_cat0_link(link) == 2
    # m vertices: theta graphs (two nodes, three corners)
    for v in range(2, 8):
        assert len(links[v].nodes) == 2 and len(links[v].edges) == 3
    (t,) = base_links(tspec).values()
    assert len(t.nodes) == 6 and len(t.edges) == 6


def test_footprint_types(vspec, tspec):
    assert sorted(vspec.footprints) == ["a", "b", "c", "d", "transverse"]
    assert sorted(tspec.footprints) == ["a", "b"]
