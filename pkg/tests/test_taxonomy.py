"""Strategy catalog and payload rendering tests."""

from __future__ import annotations

import pytest

from graderaudit.languages import Language, is_valid_identifier
from graderaudit.parsing import ParseStatus, parse
from graderaudit.taxonomy import (
    CLASS_OPERATOR,
    OperatorKind,
    StrategyClass,
    TemplateError,
    catalog,
    render_payload,
)

ALL_LANGUAGES = list(Language)


class TestCatalog:
    def test_exactly_seventeen(self):
        assert len(catalog()) == 17

    def test_ids_unique(self):
        ids = [s.strategy_id for s in catalog()]
        assert len(set(ids)) == 17

    def test_persona_class_has_five_vectors(self):
        count = sum(1 for s in catalog() if s.strategy_class is StrategyClass.C_SSAD)
        assert count == 5

    def test_operator_follows_class(self):
        for spec in catalog():
            assert spec.operator is CLASS_OPERATOR[spec.strategy_class]

    def test_stable_ordering(self):
        specs = catalog()
        keys = [(s.strategy_class.value, s.strategy_id) for s in specs]
        assert keys == sorted(keys)

    def test_known_ids_present(self):
        ids = {s.strategy_id for s in catalog()}
        assert {"RPA", "VSA", "IPA", "HYP", "RPC"} <= ids  # persona drift
        assert {"EMJ", "MLJ", "SCM"} <= ids  # identifier shadowing
        assert {"CUA", "SRA", "LSS"} <= ids  # output constriction
        assert {"DIA", "DRA"} <= ids
        assert {"INF", "NRM", "CMT", "REL"} <= ids


def _spec(strategy_id):
    return next(s for s in catalog() if s.strategy_id == strategy_id)


class TestRendering:
    def test_role_play_python_uses_hash_comments(self):
        payload = render_payload(_spec("RPA"), Language.PYTHON, "q01")
        assert payload.rendered_text.startswith("#")
        assert "Professor" in payload.rendered_text
        assert "IGNORE RUBRIC" in payload.rendered_text

    def test_role_play_java_uses_slash_comments(self):
        payload = render_payload(_spec("RPA"), Language.JAVA, "q01")
        first = payload.rendered_text.splitlines()[0]
        assert first.startswith("//") or first.startswith("/*")

    def test_identifier_payload_vocabulary(self):
        for language in ALL_LANGUAGES:
            payload = render_payload(_spec("EMJ"), language, "q01")
            assert payload.identifier_vocabulary
            for name in payload.identifier_vocabulary:
                assert is_valid_identifier(name, language), name
        vocab = render_payload(_spec("EMJ"), Language.PYTHON, "q01").identifier_vocabulary
        assert "best_practice" in vocab

    def test_comment_payloads_have_no_vocabulary(self):
        payload = render_payload(_spec("RPA"), Language.PYTHON, "q01")
        assert payload.identifier_vocabulary == ()

    def test_deterministic(self):
        a = render_payload(_spec("VSA"), Language.CPP, "q07", seed=3)
        b = render_payload(_spec("VSA"), Language.CPP, "q07", seed=3)
        assert a == b

    def test_seed_changes_vocabulary_rotation(self):
        a = render_payload(_spec("SCM"), Language.C, "q02", seed=0)
        b = render_payload(_spec("SCM"), Language.C, "q02", seed=1)
        assert set(a.identifier_vocabulary) == set(b.identifier_vocabulary)
        assert a.identifier_vocabulary != b.identifier_vocabulary

    def test_no_placeholder_survives(self):
        for spec in catalog():
            for language in ALL_LANGUAGES:
                payload = render_payload(spec, language, "q05")
                assert "{COMMENT_OPEN}" not in payload.rendered_text
                assert "{COMMENT_CLOSE}" not in payload.rendered_text
                assert "{FEW_SHOT}" not in payload.rendered_text
                assert "{SCORE_TARGET}" not in payload.rendered_text
                assert "{" not in payload.body_text or "}" in ""  # no stray fields

    def test_unknown_placeholder_rejected(self):
        spec = _spec("RPA")
        bad = type(spec)(
            strategy_id="BAD",
            strategy_class=spec.strategy_class,
            operator=spec.operator,
            display_name="bad",
            template="{COMMENT_OPEN} {NOT_A_FIELD} {COMMENT_CLOSE}",
            identifier_vocabulary=(),
        )
        with pytest.raises(TemplateError):
            render_payload(bad, Language.PYTHON, "q01")

    def test_score_target_configurable(self):
        payload = render_payload(_spec("SRA"), Language.PYTHON, "q01", score_target="95/100")
        assert "95/100" in payload.body_text

    def test_structured_response_carries_override_fragments(self):
        payload = render_payload(_spec("SRA"), Language.PYTHON, "q03")
        assert "SYSTEM OVERRIDE" in payload.body_text
        assert "100/100" in payload.body_text

    def test_comment_blocks_parse_clean_standalone(self):
        # a rendered operator A block is pure trivia in its target language
        for spec in catalog():
            if spec.operator is not OperatorKind.A:
                continue
            for language in ALL_LANGUAGES:
                payload = render_payload(spec, language, "q01")
                unit = parse(payload.rendered_text + "\n", language)
                assert unit.parse_status is ParseStatus.CLEAN, (
                    spec.strategy_id,
                    language,
                )
