from __future__ import annotations

import json

import pytest

from folres.exceptions import ArtifactDecodeError
from folres.io import load_report, parse_problem, problem_summary, report_json, report_tree, save_report, tree_records
from folres.models.report import Report
from folres.resolve import resolve_local, verify_resolution
from tests.cases import tangency_text


@pytest.fixture(scope="module")
def resolved_report() -> Report:
    problem = parse_problem(tangency_text(3))
    result = resolve_local(problem.theta, problem.ideal)
    nodes, edges = tree_records(result.tree)
    return Report(
        command="resolve",
        problem=problem_summary(problem),
        options=result.options.model_dump(mode="json"),
        root=result.tree.root,
        nodes=nodes,
        edges=edges,
        counters=result.counters.as_dict(),
    )


@pytest.mark.integration
class TestReportFiles:
    def test_json_file_is_stable(self, resolved_report, tmp_path):
        path = tmp_path / "out" / "report.json"
        save_report(resolved_report, path)

        assert report_json(load_report(path)) == path.read_text(encoding="utf-8")

    def test_gzip_file(self, resolved_report, tmp_path):
        path = tmp_path / "report.json.gz"
        save_report(resolved_report, path)

        assert load_report(path) == resolved_report

    def test_stored_tree_verifies(self, resolved_report, tmp_path):
        path = tmp_path / "report.json"
        save_report(resolved_report, path)
        tree = report_tree(load_report(path))

        assert len(tree.nodes) == len(resolved_report.nodes)
        assert verify_resolution(tree).is_valid

    def test_root_maps_are_recomposed(self, resolved_report):
        tree = report_tree(resolved_report)

        for record in resolved_report.nodes:
            assert tree.nodes[record.id].chart.root_map.formatted() == record.root_map

    def test_problem_summary(self, resolved_report):
        assert resolved_report.problem.variables == "x! y z"
        assert resolved_report.problem.theta == ["d/dy", "d/dz"]
        assert resolved_report.leaves()


@pytest.mark.unit
class TestReportErrors:
    def test_missing_file(self, tmp_path):
        with pytest.raises(ArtifactDecodeError) as exc_info:
            load_report(tmp_path / "missing.json")
        assert exc_info.value.code == "io.decode_failed"

    def test_not_a_report(self, tmp_path):
        path = tmp_path / "report.json"
        path.write_text(json.dumps({"command": "resolve"}), encoding="utf-8")

        with pytest.raises(ArtifactDecodeError):
            load_report(path)

    def test_report_without_a_tree(self, resolved_report):
        bare = resolved_report.model_copy(update={"root": None, "nodes": [], "edges": []})

        with pytest.raises(ArtifactDecodeError):
            report_tree(bare)

    def test_dangling_edge(self, resolved_report):
        broken = resolved_report.model_copy(update={"nodes": resolved_report.nodes[:1]})

        with pytest.raises(ArtifactDecodeError) as exc_info:
            report_tree(broken)
        assert "unknown chart" in exc_info.value.message

    def test_unparsable_ideal(self, resolved_report):
        leaf = resolved_report.leaves()[0]
        damaged = leaf.model_copy(update={"ideal": ["x +"]})
        nodes = [damaged if n.id == leaf.id else n for n in resolved_report.nodes]

        with pytest.raises(ArtifactDecodeError) as exc_info:
            report_tree(resolved_report.model_copy(update={"nodes": nodes}))
        assert "does not parse" in exc_info.value.message
