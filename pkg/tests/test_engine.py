"""Conversation engine: routing, mirroring fallback, learning, thresholds."""

from __future__ import annotations

import json

import pytest

from nextline.corpus import build_corpus
from nextline.engine import (
    DEFAULT_THRESHOLDS,
    Engine,
    EngineConfig,
    Session,
    build_swap_map,
    learn_from_turn,
    merged_search_domain,
    pronoun_swap,
)
from nextline.knowledge import FixtureProvider
from nextline.store import load_learned


class TestPronounSwap:
    def test_first_person_to_second(self):
        assert pronoun_swap("I want to know this.") == "You want to know this."

    def test_we_and_they_swap_both_ways(self):
        assert pronoun_swap("We know.") == "They know."
        assert pronoun_swap("They know.") == "We know."

    def test_am_and_are_swap_both_ways(self):
        # The pair table is applied blindly in both directions, so "are"
        # becomes "am" even where a human editor would conjugate.
        assert pronoun_swap("We are going home.") == "They am going home."

    def test_case_follows_original(self):
        assert pronoun_swap("i am here") == "you are here"
        # All-caps words stay all-caps; a single capital letter is treated
        # as an initial capital ("I" -> "You", not "YOU").
        assert pronoun_swap("I AM here") == "You ARE here"

    def test_me_maps_to_you_but_you_maps_to_i(self):
        # The table is not a bijection: the first pair (i, you) claims the
        # reverse direction before (me, you) is merged in.
        assert pronoun_swap("tell me") == "tell you"
        assert pronoun_swap("you said so") == "i said so"

    def test_punctuation_and_spacing_untouched(self):
        assert pronoun_swap("I, my friend!  am...") == "You, your friend!  are..."

    def test_single_pass_no_double_swap(self):
        # "i" -> "you" must not be re-swapped to "i" again within the pass.
        assert pronoun_swap("i you") == "you i"

    def test_words_containing_pronouns_untouched(self):
        assert pronoun_swap("item myself iodine") == "item myself iodine"

    def test_apostrophes_keep_words_whole(self):
        # "i'm" is one word and has no table entry, so it passes through.
        assert pronoun_swap("i'm sure") == "i'm sure"

    def test_custom_table(self):
        table = build_swap_map([("cat", "dog")])
        assert pronoun_swap("The Cat sat.", table) == "The Dog sat."

    def test_round_trip_where_table_is_symmetric(self):
        # For words whose mapping is mutual, swapping twice is the identity.
        text = "i was there and we saw it"
        assert pronoun_swap(pronoun_swap(text)) == text


class TestBuildSwapMap:
    def test_both_directions_registered(self):
        table = build_swap_map([("i", "you")])
        assert table == {"i": "you", "you": "i"}

    def test_earliest_pair_wins_conflicts(self):
        table = build_swap_map([("i", "you"), ("me", "you")])
        assert table["you"] == "i"
        assert table["me"] == "you"


class TestLearnFromTurn:
    def _session(self, *entries):
        transcript = [(speaker, text, f"2026-01-01T00:00:0{i}+00:00")
                      for i, (speaker, text) in enumerate(entries)]
        return Session("s1", "lev", 0.5, transcript)

    def test_short_transcript_skipped(self):
        assert learn_from_turn(self._session(("user", "hi"))) is None
        assert learn_from_turn(self._session(("user", "hi"), ("bot", "yo"))) is None

    def test_qualifying_turn_learned(self):
        session = self._session(("user", "hi"), ("bot", "B text"), ("user", "U text"))
        pair = learn_from_turn(session)
        assert pair is not None
        assert pair.prompt == "B text"
        assert pair.response == "U text"
        assert pair.session_id == "s1"
        assert pair.created_at == session.transcript[-1][2]

    def test_echo_skipped(self):
        session = self._session(("user", "hi"), ("bot", "same"), ("user", "same"))
        assert learn_from_turn(session) is None

    def test_blank_reply_skipped(self):
        session = self._session(("user", "hi"), ("bot", "B"), ("user", "   "))
        assert learn_from_turn(session) is None

    def test_wrong_speaker_order_skipped(self):
        session = self._session(("bot", "a"), ("user", "b"), ("bot", "c"))
        assert learn_from_turn(session) is None


@pytest.fixture
def seed_corpus():
    return build_corpus(
        [
            (
                "seed.srt",
                [
                    "hello there",
                    "hi how are you",
                    "what a lovely morning",
                    "indeed it is",
                ],
            )
        ]
    )


class TestRouting:
    def test_corpus_match_returns_next_line(self, seed_corpus):
        engine = Engine(seed_corpus)
        reply = engine.respond(engine.session("a"), "hello there")
        assert reply.text == "hi how are you"
        assert reply.provenance == "corpus"
        assert reply.match is not None and reply.match.score == 0.0
        assert reply.matched_line_text == "hello there"

    def test_fallback_is_pronoun_swap(self, seed_corpus):
        config = EngineConfig(threshold=0.0)
        engine = Engine(seed_corpus, config)
        reply = engine.respond(engine.session("a"), "I want to know this.")
        assert reply.text == "You want to know this."
        assert reply.provenance == "pronoun-swap"
        assert reply.match is None

    def test_knowledge_wins_over_corpus(self, seed_corpus, tmp_path):
        records = [{"kind": "who", "entity": "Sachin Tendulkar", "answer": "a cricketer"}]
        path = tmp_path / "k.json"
        path.write_text(json.dumps(records))
        engine = Engine(seed_corpus, knowledge=FixtureProvider(path))
        reply = engine.respond(engine.session("a"), "Who is Sachin Tendulkar?")
        assert reply.provenance == "knowledge"
        assert reply.text == "Sachin Tendulkar is a cricketer."

    def test_knowledge_miss_falls_through(self, seed_corpus, tmp_path):
        path = tmp_path / "k.json"
        path.write_text(json.dumps([]))
        engine = Engine(seed_corpus, knowledge=FixtureProvider(path))
        reply = engine.respond(engine.session("a"), "Who is Nobody At All?")
        assert reply.provenance in {"corpus", "pronoun-swap"}

    def test_blank_input_rejected(self, seed_corpus):
        engine = Engine(seed_corpus)
        with pytest.raises(ValueError):
            engine.respond(engine.session("a"), "   ")


class TestThresholds:
    def test_defaults_per_strategy(self):
        assert DEFAULT_THRESHOLDS == {"lev": 0.5, "bow-l1": 0.35, "bow-l2": 0.25}
        config = EngineConfig()
        assert config.effective_threshold("lev") == 0.5
        assert config.effective_threshold("bow-l1") == 0.35
        assert EngineConfig(threshold=0.1).effective_threshold("lev") == 0.1

    def test_lev_score_normalized_by_longer_text(self, seed_corpus):
        # "hello thore" is 1 edit from "hello there" (11 chars): 1/11 < 0.5
        # passes; with threshold 0 the same query must fall back.
        engine = Engine(seed_corpus, EngineConfig(strategy="lev"))
        reply = engine.respond(engine.session("a"), "hello thore")
        assert reply.provenance == "corpus"

        strict = Engine(seed_corpus, EngineConfig(strategy="lev", threshold=0.0))
        reply = strict.respond(strict.session("a"), "hello thore")
        assert reply.provenance == "pronoun-swap"

    def test_zero_threshold_allows_exact_match(self, seed_corpus):
        for strategy in ("lev", "bow-l1"):
            engine = Engine(seed_corpus, EngineConfig(strategy=strategy, threshold=0.0))
            reply = engine.respond(engine.session("a"), "hello there")
            assert reply.provenance == "corpus"
            assert reply.text == "hi how are you"

    def test_bow_threshold_is_raw_score(self, seed_corpus):
        # Query shares one of two stemmed terms with "what a lovely morning"
        # -> L1 distance 1.0 > 0.35 -> fallback.
        engine = Engine(seed_corpus, EngineConfig(strategy="bow-l1"))
        reply = engine.respond(engine.session("a"), "lovely zebra")
        assert reply.provenance == "pronoun-swap"


class TestLearning:
    def test_pair_learned_and_persisted(self, seed_corpus, tmp_path):
        learned_path = tmp_path / "learned.jsonl"
        engine = Engine(seed_corpus, EngineConfig(learned_path=str(learned_path)))
        session = engine.session("s1")

        first = engine.respond(session, "zzz unmatched gibberish qqq")
        assert first.provenance == "pronoun-swap"
        bot_text = first.text
        engine.respond(session, "a brand new answer")

        assert len(engine.learned) == 1
        pair = engine.learned[0]
        assert pair.prompt == bot_text
        assert pair.response == "a brand new answer"

        saved = load_learned(learned_path)
        assert saved.skipped == 0
        assert [p.prompt for p in saved.pairs] == [bot_text]

    def test_learned_pair_answers_new_session(self, seed_corpus):
        engine = Engine(seed_corpus)
        first = engine.session("one")
        opener = engine.respond(first, "zzz unmatched gibberish qqq")
        engine.respond(first, "a brand new answer")

        second = engine.session("two")
        reply = engine.respond(second, opener.text)
        assert reply.provenance == "learned"
        assert reply.text == "a brand new answer"

    def test_learned_loaded_from_disk_on_startup(self, seed_corpus, tmp_path):
        learned_path = tmp_path / "learned.jsonl"
        config = EngineConfig(learned_path=str(learned_path))
        engine = Engine(seed_corpus, config)
        session = engine.session("s1")
        opener = engine.respond(session, "zzz unmatched gibberish qqq")
        engine.respond(session, "a brand new answer")

        fresh = Engine(seed_corpus, EngineConfig(learned_path=str(learned_path)))
        reply = fresh.respond(fresh.session("x"), opener.text)
        assert reply.provenance == "learned"
        assert reply.text == "a brand new answer"

    def test_corpus_wins_score_tie_against_learned(self, seed_corpus):
        engine = Engine(seed_corpus)
        session = engine.session("s1")
        # Teach a pair whose prompt collides with a corpus line.
        session.transcript.append(("user", "x", "2026-01-01T00:00:00+00:00"))
        session.transcript.append(("bot", "hello there", "2026-01-01T00:00:01+00:00"))
        reply = engine.respond(session, "now learn this")
        assert len(engine.learned) == 1
        assert engine.learned[0].prompt == "hello there"

        other = engine.session("s2")
        tied = engine.respond(other, "hello there")
        assert tied.provenance == "corpus"
        assert tied.text == "hi how are you"

    def test_one_pair_per_qualifying_turn(self, seed_corpus):
        engine = Engine(seed_corpus, EngineConfig(threshold=0.0))
        session = engine.session("s1")
        engine.respond(session, "first gibberish zzz")   # no learn (opening turn)
        engine.respond(session, "second gibberish qqq")  # learns 1
        engine.respond(session, "third gibberish www")   # learns 1
        assert len(engine.learned) == 2


class TestSessionsAndConfig:
    def test_session_get_or_create(self, seed_corpus):
        engine = Engine(seed_corpus, EngineConfig(strategy="bow-l1"))
        s = engine.session("abc")
        assert s is engine.session("abc")
        assert s.strategy == "bow-l1"
        assert s.threshold == DEFAULT_THRESHOLDS["bow-l1"]

    def test_transcript_records_both_speakers(self, seed_corpus):
        engine = Engine(seed_corpus)
        session = engine.session("abc")
        engine.respond(session, "hello there")
        assert [speaker for speaker, _, _ in session.transcript] == ["user", "bot"]

    def test_transcript_persisted_when_configured(self, seed_corpus, tmp_path):
        engine = Engine(seed_corpus, EngineConfig(sessions_dir=str(tmp_path / "s")))
        engine.respond(engine.session("abc"), "hello there")
        from nextline.store import load_transcript

        entries = load_transcript(tmp_path / "s", "abc")
        assert len(entries) == 2
        assert entries[0][0] == "user"
        assert entries[1][0] == "bot"

    def test_stats(self, seed_corpus):
        engine = Engine(seed_corpus)
        stats = engine.stats()
        assert stats["corpus_lines"] == 4
        assert stats["episodes"] == 1
        assert stats["learned_pairs"] == 0
        assert stats["strategy"] == "lev"
        assert stats["threshold"] == pytest.approx(0.5)

    def test_config_from_file_rejects_unknown_keys(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"strategy": "lev", "bogus": 1}))
        with pytest.raises(ValueError):
            EngineConfig.from_file(path)

    def test_config_from_file(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"strategy": "bow-l2", "workers": 4}))
        config = EngineConfig.from_file(path)
        assert config.strategy == "bow-l2"
        assert config.workers == 4
        assert config.mode == "indexed"


class TestMergedDomain:
    def test_learned_ids_follow_corpus_ids(self, seed_corpus):
        from nextline.store import LearnedPair

        pairs = [LearnedPair("p1", "r1", "s", "t"), LearnedPair("p2", "r2", "s", "t")]
        domain = merged_search_domain(seed_corpus, pairs)
        assert domain.searchable_ids()[-2:] == [4, 5]
        assert domain.prompt_text(4) == "p1"
        assert domain.reply_text(5) == "r2"
