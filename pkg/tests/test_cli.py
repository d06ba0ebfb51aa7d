import json

from loopcat.cli import main

Z2_MONOID = {"monoid": {"table": [[0, 1], [1, 0]], "identity": 0, "size": 2}}
Z2_REGULAR = {"pseudocharacter": {"classes": [[0], [1]], "values": ["2", "0"]}}

QX3_EPS7 = {"frobenius": {
    "dim": 3,
    "structure": [[["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
                  [["0", "1", "0"], ["0", "0", "1"], ["0", "0", "0"]],
                  [["0", "0", "1"], ["0", "0", "0"], ["0", "0", "0"]]],
    "unit": ["1", "0", "0"],
    "counit": ["7", "0", "1"]}}


def run_cli(tmp_path, capsys, command, doc, *flags):
    path = tmp_path / "job.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    code = main([command, "--input", str(path), *flags])
    return code, capsys.readouterr().out


def run_json(tmp_path, capsys, command, doc, *flags):
    code, out = run_cli(tmp_path, capsys, command, doc, "--format", "json",
                        *flags)
    return code, json.loads(out)


# --- statespace -----------------------------------------------------------


def test_statespace_monoid_input(tmp_path, capsys):
    doc = dict(Z2_MONOID, alpha=["2", "0"])
    code, out = run_json(tmp_path, capsys, "statespace", doc)
    assert code == 0
    assert out["rank"] == 2
    assert out["spanning_size"] == 2
    assert out["stabilized"] is True
    assert out["cap_words"] == 4
    assert "gram" not in out


def test_statespace_emits_gram_on_request(tmp_path, capsys):
    doc = dict(Z2_MONOID, alpha=["2", "0"], emit_gram=True)
    code, out = run_json(tmp_path, capsys, "statespace", doc)
    assert code == 0
    # kets e, s paired against themselves: loops ee, es, se, ss
    assert out["gram"] == [["2", "0"], ["0", "2"]]


def test_statespace_free_monoid_loop_table(tmp_path, capsys):
    doc = {"free_monoid": {"letters": "a"},
           "loops": {"a" * k: str(2 if k % 2 == 0 else 0) for k in range(9)}}
    code, out = run_json(tmp_path, capsys, "statespace", doc,
                         "--cap-words", "3")
    assert code == 0
    assert out["spanning_size"] == 4  # labels of length <= 3 on one arc
    assert out["rank"] == 2
    assert out["stabilized"] is True


def test_statespace_missing_loop_value_is_domain_error(tmp_path, capsys):
    doc = {"free_monoid": {"letters": "a"}, "loops": {"": "1"}}
    code, out = run_json(tmp_path, capsys, "statespace", doc)
    assert code == 1
    assert out["error"] == "MissingValue"


def test_statespace_conflicting_loop_keys_rejected(tmp_path, capsys):
    # ab and ba name the same loop class; disagreeing values are malformed
    doc = {"free_monoid": {"letters": "ab"},
           "loops": {"ab": "1", "ba": "2"}}
    code, out = run_json(tmp_path, capsys, "statespace", doc)
    assert code == 2
    assert out["error"] == "ValueError"


def test_statespace_interval_tables_attach_a_boundary(tmp_path, capsys):
    # single positive endpoint: kets are half-intervals labelled by words
    doc = {"free_monoid": {"letters": "a"},
           "loops": {},
           "intervals": {"a" * k: "1" for k in range(9)},
           "object": [[0, 1]]}
    code, out = run_json(tmp_path, capsys, "statespace", doc,
                         "--cap-words", "2")
    assert code == 0
    assert out["spanning_size"] == 3
    assert out["rank"] == 1


# --- boolean-statespace ---------------------------------------------------


def test_boolean_statespace_residual_counts(tmp_path, capsys):
    doc = {"alphabet": "ab",
           "accepted": ["", "a", "aa", "ab", "aab", "aba", "abab", "aaab"]}
    code, out = run_json(tmp_path, capsys, "boolean-statespace", doc,
                         "--cap-words", "2")
    assert code == 0
    assert out["spanning_size"] == 7
    assert out["n_states"] == len(out["states"])
    assert out["n_join_irreducible"] <= out["n_states"]
    assert all(set(row) <= {"0", "1"} for row in out["states"])


def test_boolean_statespace_single_word_language(tmp_path, capsys):
    doc = {"alphabet": "a", "accepted": ["aa"]}
    code, out = run_json(tmp_path, capsys, "boolean-statespace", doc,
                         "--cap-words", "3")
    assert code == 0
    # residuals of {aa}: {aa}, {a}, {eps}, and the empty language
    assert out["n_states"] == 4


# --- automaton-minimize ---------------------------------------------------


def test_automaton_minimize_drops_unreachable_weight(tmp_path, capsys):
    doc = {"automaton": {
        "initial": ["1", "0"],
        "transitions": {"a": [["1", "0"], ["0", "1"]],
                        "b": [["0", "0"], ["0", "0"]]},
        "final": ["1", "1"]}}
    code, out = run_json(tmp_path, capsys, "automaton-minimize", doc)
    assert code == 0
    assert out["dimension_before"] == 2
    assert out["dimension_after"] == 1
    assert sorted(out["automaton"]["transitions"]) == ["a", "b"]


def test_automaton_minimize_rejects_ragged_shapes(tmp_path, capsys):
    doc = {"automaton": {"initial": ["1", "0"],
                         "transitions": {"a": [["1"]]},
                         "final": ["1", "0"]}}
    code, out = run_json(tmp_path, capsys, "automaton-minimize", doc)
    assert code == 2
    assert out["error"] == "ValueError"


# --- pseudochar commands --------------------------------------------------


def test_degree_of_regular_character(tmp_path, capsys):
    doc = dict(Z2_MONOID, **Z2_REGULAR)
    code, out = run_json(tmp_path, capsys, "pseudochar-degree", doc)
    assert code == 0
    assert out["d"] == 2
    assert out["witness"] == [0, 0]
    assert out["max_degree"] == 6


def test_degree_rejects_non_pseudocharacter(tmp_path, capsys):
    doc = dict(Z2_MONOID)
    doc["pseudocharacter"] = {"classes": [[0], [1]], "values": ["1/3", "0"]}
    code, out = run_json(tmp_path, capsys, "pseudochar-degree", doc,
                         "--max-degree", "3")
    assert code == 1
    assert out["error"] == "NotPseudo"


def test_charpoly_of_involution(tmp_path, capsys):
    doc = dict(Z2_MONOID, **Z2_REGULAR, x=1, d=2)
    code, out = run_json(tmp_path, capsys, "pseudochar-charpoly", doc)
    assert code == 0
    assert out["coeffs"] == ["-1", "0", "1"]
    assert out["display"] == "-1 + t^2"


def test_charpoly_wrong_degree_is_domain_error(tmp_path, capsys):
    doc = dict(Z2_MONOID, **Z2_REGULAR, x=1, d=3)
    code, out = run_json(tmp_path, capsys, "pseudochar-charpoly", doc)
    assert code == 1
    assert out["error"] == "DegreeMismatch"


def test_lift_regular_character(tmp_path, capsys):
    doc = dict(Z2_MONOID, **Z2_REGULAR)
    doc["table"] = [{"classes": [[0], [1]], "values": ["1", "1"]},
                    {"classes": [[0], [1]], "values": ["1", "-1"]}]
    code, out = run_json(tmp_path, capsys, "pseudochar-lift", doc)
    assert code == 0
    assert out["multiplicities"] == [1, 1]


def test_lift_infeasible_reports_solution(tmp_path, capsys):
    doc = dict(Z2_MONOID)
    doc["pseudocharacter"] = {"classes": [[0], [1]], "values": ["1", "5"]}
    doc["table"] = [{"classes": [[0], [1]], "values": ["1", "1"]},
                    {"classes": [[0], [1]], "values": ["1", "-1"]}]
    code, out = run_json(tmp_path, capsys, "pseudochar-lift", doc)
    assert code == 1
    assert out["error"] == "Infeasible"
    assert out["solution"] == ["3", "-2"]


def test_lift_singular_table(tmp_path, capsys):
    doc = dict(Z2_MONOID, **Z2_REGULAR)
    doc["table"] = [{"classes": [[0], [1]], "values": ["1", "1"]},
                    {"classes": [[0], [1]], "values": ["2", "2"]}]
    code, out = run_json(tmp_path, capsys, "pseudochar-lift", doc)
    assert code == 1
    assert out["error"] == "SingularTable"


# --- holonomy --------------------------------------------------------------


def test_holonomy_diagonal_loop(tmp_path, capsys):
    doc = {"graph": {"n_vertices": 1,
                     "edges": [[0, 0, [["1", "0"], ["0", "2"]]]]}}
    code, out = run_json(tmp_path, capsys, "holonomy", doc,
                         "--cap-words", "3")
    assert code == 0
    assert out["dimension"] == 2
    assert out["d"] == 2
    assert out["table"] == {"0": "3", "0,0": "5", "0,0,0": "9"}
    assert out["max_len"] == 3


def test_holonomy_singular_edge(tmp_path, capsys):
    doc = {"graph": {"n_vertices": 1, "edges": [[0, 0, [["0"]]]]}}
    code, out = run_json(tmp_path, capsys, "holonomy", doc)
    assert code == 1
    assert out["error"] == "NonInvertibleEdge"


# --- frobenius-validate / genfun / classify / witness -----------------------


def test_frobenius_validate_reports_handle(tmp_path, capsys):
    code, out = run_json(tmp_path, capsys, "frobenius-validate", QX3_EPS7)
    assert code == 0
    assert out["ok"] is True
    assert out["handle"] == ["0", "0", "3"]
    assert out["genus_one_value"] == "3"


def test_frobenius_validate_degenerate_counit(tmp_path, capsys):
    doc = {"frobenius": {
        "dim": 2,
        "structure": [[["1", "0"], ["0", "1"]], [["0", "1"], ["0", "0"]]],
        "unit": ["1", "0"], "counit": ["1", "0"]}}
    code, out = run_json(tmp_path, capsys, "frobenius-validate", doc)
    assert code == 1
    assert out["error"] == "NondegeneracyFailure"


def test_genfun_truncated_cubic(tmp_path, capsys):
    code, out = run_json(tmp_path, capsys, "genfun", QX3_EPS7)
    assert code == 0
    assert out["display"] == "7 + 3T"
    assert out["genfun"] == {"num": ["7", "3"], "den": ["1"]}


def test_classify_accepts_split_form(tmp_path, capsys):
    doc = {"genfun": {"num": ["11/2", "-8", "-4"], "den": ["1", "-2"]}}
    code, out = run_json(tmp_path, capsys, "classify", doc)
    assert code == 0
    assert out["classification"] == {"mu": "5", "m": 2, "poles": [["2", 1]]}


def test_classify_rejects_m_equal_one(tmp_path, capsys):
    doc = {"genfun": {"num": ["5", "1"], "den": ["1"]}}
    code, out = run_json(tmp_path, capsys, "classify", doc)
    assert code == 1
    assert out["error"] == "Reject"
    assert out["reason"] == "M1Forbidden"


def test_classify_rejects_irrational_poles(tmp_path, capsys):
    doc = {"genfun": {"num": ["1"], "den": ["1", "-1", "-1"]}}
    code, out = run_json(tmp_path, capsys, "classify", doc)
    assert code == 1
    assert out["reason"] == "NonSplitDenominator"


def test_witness_round_trip_through_cli(tmp_path, capsys):
    cls = {"classification": {"mu": "0", "m": 0,
                              "poles": [["1", 2], ["2", 1]]}}
    code, out = run_json(tmp_path, capsys, "witness", cls)
    assert code == 0
    assert out["dim"] == 3
    code2, out2 = run_json(tmp_path, capsys, "genfun",
                           {"frobenius": out["frobenius"]})
    assert code2 == 0
    code3, out3 = run_json(tmp_path, capsys, "classify",
                           {"genfun": out2["genfun"]})
    assert code3 == 0
    assert out3["classification"] == cls["classification"]


def test_witness_m1_classification_is_domain_error(tmp_path, capsys):
    doc = {"classification": {"mu": "0", "m": 1, "poles": []}}
    code, out = run_json(tmp_path, capsys, "witness", doc)
    assert code == 1
    assert out["reason"] == "M1Forbidden"


def test_witness_duplicate_poles_malformed(tmp_path, capsys):
    doc = {"classification": {"mu": "0", "m": 0,
                              "poles": [["1", 1], ["1", 1]]}}
    code, out = run_json(tmp_path, capsys, "witness", doc)
    assert code == 2
    assert out["error"] == "ValueError"


# --- pih-solve / pih-check --------------------------------------------------


def test_pih_solve_two_blocks(tmp_path, capsys):
    doc = {"blocks": [["1", 2, "2"], ["2", 1, "1"]], "alpha1": "3"}
    code, out = run_json(tmp_path, capsys, "pih-solve", doc)
    assert code == 0
    assert out["gamma"] == ["2", "0", "1/2"]
    assert out["verdict"] == "consistent"
    assert out["det"] == "4"
    assert out["unit"] == "1"


def test_pih_solve_forbidden_excess(tmp_path, capsys):
    doc = {"blocks": [["1", 1, "2"]], "alpha1": "3"}
    code, out = run_json(tmp_path, capsys, "pih-solve", doc)
    assert code == 0
    assert out["verdict"] == "inconsistent"


def test_pih_solve_repeated_eigenvalue(tmp_path, capsys):
    doc = {"blocks": [["1", 1, "1"], ["1", 1, "1"]]}
    code, out = run_json(tmp_path, capsys, "pih-solve", doc)
    assert code == 1
    assert out["error"] == "SingularT"


def test_pih_check_geometric_sequence(tmp_path, capsys):
    doc = {"pih": {"p": ["1"], "h": [["3"]], "iota": ["1/3"]},
           "alpha": ["1/3", "1", "3", "9", "27"]}
    code, out = run_json(tmp_path, capsys, "pih-check", doc)
    assert code == 0
    assert out["ok"] is True
    assert out["first_violation"] is None


def test_pih_check_reports_first_violation(tmp_path, capsys):
    doc = {"pih": {"p": ["1"], "h": [["3"]], "iota": ["1"]},
           "alpha": ["1", "3", "9", "27", "81"]}
    code, out = run_json(tmp_path, capsys, "pih-check", doc)
    assert code == 0
    assert out["ok"] is False
    assert out["first_violation"] == {"n": 0, "which": "trace"}


def test_pih_check_short_sequence(tmp_path, capsys):
    doc = {"pih": {"p": ["1"], "h": [["3"]], "iota": ["1/3"]},
           "alpha": ["1/3", "1"]}
    code, out = run_json(tmp_path, capsys, "pih-check", doc)
    assert code == 1
    assert out["error"] == "SequenceTooShort"


def test_pih_check_dimension_mismatch(tmp_path, capsys):
    doc = {"pih": {"p": ["1", "0"], "h": [["3"]], "iota": ["1"]},
           "alpha": ["1", "3", "9", "27", "81"]}
    code, out = run_json(tmp_path, capsys, "pih-check", doc)
    assert code == 1
    assert out["error"] == "DimensionMismatch"


# --- cob2 -------------------------------------------------------------------


def test_cob2_dim_constant_sequence(tmp_path, capsys):
    doc = {"alpha": ["2"] * 12, "m": 1}
    code, out = run_json(tmp_path, capsys, "cob2-dim", doc,
                         "--cap-genus", "3")
    assert code == 0
    assert out["dimension"] == 1
    assert out["stabilized"] is True
    assert out["spanning_size"] == 4


def test_cob2_dim_short_sequence(tmp_path, capsys):
    doc = {"alpha": ["2", "2"], "m": 1}
    code, out = run_json(tmp_path, capsys, "cob2-dim", doc)
    assert code == 1
    assert out["error"] == "SequenceTooShort"


def test_cob2_pseudo_dimension_one_sequence(tmp_path, capsys):
    doc = {"alpha": ["1"] * 8, "d": 1}
    code, out = run_json(tmp_path, capsys, "cob2-pseudo", doc)
    assert code == 0
    assert out["ok"] is True
    assert out["witness"] is None
    assert out["cap_dots"] == 2


def test_cob2_pseudo_finds_witness(tmp_path, capsys):
    doc = {"alpha": ["5", "1"] + ["0"] * 10, "d": 1}
    code, out = run_json(tmp_path, capsys, "cob2-pseudo", doc)
    assert code == 0
    assert out["ok"] is False
    assert out["witness"][0] in ("interval", "circle")


# --- plumbing ---------------------------------------------------------------


def test_malformed_json_exits_two(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("not json", encoding="utf-8")
    code = main(["classify", "--input", str(path)])
    out = capsys.readouterr().out
    assert code == 2
    assert "JSONDecodeError" in out


def test_missing_file_exits_two(tmp_path, capsys):
    code = main(["classify", "--input", str(tmp_path / "nope.json")])
    out = capsys.readouterr().out
    assert code == 2
    assert "FileNotFoundError" in out


def test_missing_key_exits_two(tmp_path, capsys):
    code, out = run_json(tmp_path, capsys, "classify", {"wrong": 1})
    assert code == 2
    assert out["error"] == "KeyError"


def test_output_is_byte_stable(tmp_path, capsys):
    doc = dict(Z2_MONOID, alpha=["2", "0"])
    path = tmp_path / "job.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    outs = []
    for _ in range(2):
        for fmt in ("text", "json"):
            assert main(["statespace", "--input", str(path),
                         "--format", fmt]) == 0
            outs.append(capsys.readouterr().out)
    assert outs[0] == outs[2]
    assert outs[1] == outs[3]


def test_text_format_is_sorted_key_lines(tmp_path, capsys):
    doc = {"genfun": {"num": ["5", "2"], "den": ["1"]}}
    code, out = run_cli(tmp_path, capsys, "classify", doc)
    assert code == 0
    keys = [line.split(":", 1)[0] for line in out.splitlines()]
    assert keys == sorted(keys)
    assert "command: classify" in out.splitlines()
