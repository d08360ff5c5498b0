"""The simulated user's full turn pipeline against scripted agents."""

from __future__ import annotations

import pytest

from crssim import (
    Agenda,
    ContextState,
    DialogueParticipant,
    Intent,
    Participant,
    Persona,
    Polarity,
    PreferenceGraph,
    Response,
    SatisfactionEvent,
    SimulatedUser,
    SlotValue,
    UserProfile,
    Utterance,
    connect_dialogue,
)
from crssim.mock_agent import MockCRSAgent, RECOMMEND_TEXT, WELCOME_TEXT

DISCLOSE = Intent("DISCLOSE")
ACCEPT = Intent("ACCEPT")
REJECT = Intent("REJECT")
DONE = Intent("DONE")


def make_profile(items, seed=11, patience=3, cooperativeness=0.8,
                 satisfaction=3, item_pref=None, attr_pref=None):
    graph = PreferenceGraph(items, seed=seed)
    graph.item_pref.update(item_pref or {})
    graph.attr_pref.update(attr_pref or {})
    return UserProfile(
        user_id="test_user",
        persona=Persona(patience=patience, cooperativeness=cooperativeness),
        context=ContextState(satisfaction=satisfaction),
        preferences=graph,
        seed=seed,
    )


def make_user(trained, items, profile, agenda=None):
    user = SimulatedUser(
        profile=profile,
        interaction_model=trained.interaction_model,
        intent_model=trained.intent_model,
        lexicon=trained.lexicon,
        templates=trained.templates,
        items=items,
    )
    if agenda is not None:
        user.agenda = agenda
    return user


def agent_says(text, turn=0):
    return Utterance(Participant.AGENT, text, turn)


class TestTurnPipeline:
    def test_user_never_opens(self, trained, movie_items):
        user = make_user(trained, movie_items, make_profile(movie_items))
        with pytest.raises(ValueError, match="agent speaks first"):
            user.respond(None)

    def test_first_agent_utterance_pops_the_plan(self, trained, movie_items):
        user = make_user(trained, movie_items, make_profile(movie_items),
                         agenda=Agenda(stack=[DISCLOSE, DONE]))
        response = user.respond(agent_says(WELCOME_TEXT))
        assert response.intent == DISCLOSE
        assert not response.terminate
        assert user.agenda.stack == [DONE]
        trace = user.trace[-1]
        assert trace.agent_intent == Intent("WELCOME")
        assert trace.event is SatisfactionEvent.EXPECTED_RESPONSE
        assert trace.satisfaction == 3

    def test_elicited_disclosure_uses_strongest_preference(
            self, trained, movie_items):
        profile = make_profile(movie_items, attr_pref={
            ("genre", "action"): 0.9, ("genre", "drama"): 0.4})
        user = make_user(trained, movie_items, profile,
                         agenda=Agenda(stack=[DISCLOSE, DONE]))
        response = user.respond(agent_says(
            "What genre of movie are you in the mood for?"))
        assert response.intent == DISCLOSE
        assert response.slot_values == [SlotValue("genre", "action")]
        assert "action" in response.text
        assert user.trace[-1].template.polarity is Polarity.POSITIVE

    def test_negative_preference_phrases_negatively(self, trained,
                                                    movie_items):
        # REVISE is the one intent whose harvested templates include a
        # negative phrasing, so the polarity request is observable there.
        profile = make_profile(movie_items, attr_pref={
            ("genre", "action"): 0.3, ("genre", "horror"): -0.95})
        user = make_user(trained, movie_items, profile,
                         agenda=Agenda(stack=[Intent("REVISE"), DONE]))
        response = user.respond(agent_says(WELCOME_TEXT))
        assert response.slot_values == [SlotValue("genre", "horror")]
        assert user.trace[-1].template.polarity is Polarity.NEGATIVE
        assert "horror" in response.text

    def test_absolute_weight_tie_breaks_to_smaller_value(self, trained,
                                                         movie_items):
        profile = make_profile(movie_items, attr_pref={
            ("genre", "drama"): -0.5, ("genre", "action"): 0.5})
        user = make_user(trained, movie_items, profile,
                         agenda=Agenda(stack=[DISCLOSE, DONE]))
        response = user.respond(agent_says(WELCOME_TEXT))
        assert response.slot_values == [SlotValue("genre", "action")]

    def test_cold_start_slot_fill_is_seed_deterministic(self, trained,
                                                        movie_items):
        picks = []
        for _ in range(2):
            user = make_user(trained, movie_items,
                             make_profile(movie_items, seed=123),
                             agenda=Agenda(stack=[DISCLOSE, DONE]))
            response = user.respond(agent_says(WELCOME_TEXT))
            picks.append(response.slot_values[0])
        assert picks[0] == picks[1]
        assert picks[0].slot == "genre"
        assert picks[0].value in movie_items.values_for_slot("genre")

    def test_liked_recommendation_accepted(self, trained, movie_items):
        profile = make_profile(movie_items, item_pref={"m01": 1.0})
        user = make_user(trained, movie_items, profile,
                         agenda=Agenda(stack=[DISCLOSE, DONE]))
        user.respond(agent_says(WELCOME_TEXT))
        response = user.respond(
            agent_says(RECOMMEND_TEXT.format(name="The Matrix"), turn=2))
        assert response.intent == ACCEPT
        trace = user.trace[-1]
        assert trace.event is SatisfactionEvent.GOOD_RECOMMENDATION
        assert trace.satisfaction == 4
        assert response.satisfaction == 4
        assert trace.template.polarity is Polarity.POSITIVE

    def test_disliked_recommendation_rejected(self, trained, movie_items):
        profile = make_profile(movie_items, item_pref={"m01": -1.0})
        user = make_user(trained, movie_items, profile,
                         agenda=Agenda(stack=[DISCLOSE, DONE]))
        user.respond(agent_says(WELCOME_TEXT))
        response = user.respond(
            agent_says(RECOMMEND_TEXT.format(name="The Matrix"), turn=2))
        assert response.intent == REJECT
        trace = user.trace[-1]
        assert trace.event is SatisfactionEvent.BAD_RECOMMENDATION
        assert trace.satisfaction == 2
        assert trace.template.polarity is Polarity.NEGATIVE

    def test_unrecommended_titles_do_not_trigger_verdicts(self, trained,
                                                          movie_items):
        # an INFORM mentioning a title is not a recommendation
        profile = make_profile(movie_items, item_pref={"m01": 1.0})
        user = make_user(trained, movie_items, profile,
                         agenda=Agenda(stack=[DISCLOSE, DONE]))
        user.respond(agent_says(WELCOME_TEXT))
        response = user.respond(
            agent_says("It is about spirits and bathhouse.", turn=2))
        assert response.intent != ACCEPT

    def test_terminal_intent_terminates(self, trained, movie_items):
        user = make_user(trained, movie_items, make_profile(movie_items),
                         agenda=Agenda(stack=[DONE]))
        response = user.respond(agent_says(WELCOME_TEXT))
        assert response.intent == DONE
        assert response.terminate
        assert response.text  # the goodbye is still uttered


class TestPatience:
    def test_gibberish_agent_exhausts_patience(self, trained, movie_items):
        profile = make_profile(movie_items, patience=2, cooperativeness=1.0)
        user = make_user(trained, movie_items, profile,
                         agenda=Agenda(stack=[DISCLOSE, DONE]))
        first = user.respond(agent_says(WELCOME_TEXT))
        assert not first.terminate
        second = user.respond(agent_says("zzz blorp qwx", turn=2))
        assert second.intent == DISCLOSE  # repeats, cooperativeness 1.0
        assert not second.terminate
        third = user.respond(agent_says("zzz blorp qwx", turn=4))
        assert third.intent == DONE
        assert third.terminate
        events = [t.event for t in user.trace]
        assert events == [SatisfactionEvent.EXPECTED_RESPONSE,
                          SatisfactionEvent.UNEXPECTED_RESPONSE,
                          SatisfactionEvent.UNEXPECTED_RESPONSE]
        assert [t.satisfaction for t in user.trace] == [3, 2, 1]

    def test_satisfaction_never_leaves_range(self, trained, movie_items):
        profile = make_profile(movie_items, patience=10, cooperativeness=1.0,
                               satisfaction=2)
        user = make_user(trained, movie_items, profile,
                         agenda=Agenda(stack=[DISCLOSE, DONE]))
        user.respond(agent_says(WELCOME_TEXT))
        for i in range(5):
            response = user.respond(agent_says("zzz", turn=2 * (i + 1)))
            assert 1 <= response.satisfaction <= 5
            if response.terminate:
                break
        assert user.trace[-1].satisfaction == 1


class TestEndToEnd:
    def test_full_dialogue_against_mock_agent(self, trained, movie_items):
        profile = make_profile(movie_items, seed=7)
        user = make_user(trained, movie_items, profile)
        dialogue = connect_dialogue(user, MockCRSAgent(movie_items),
                                    max_turns=30, dialogue_id="t1")
        assert dialogue.metadata["terminated_by"] in ("user", "agent")
        assert dialogue.turns >= 1
        for utterance in dialogue.user_utterances():
            assert utterance.intent in trained.interaction_model.user_intents
            assert 1 <= utterance.satisfaction <= 5

    def test_replay_is_byte_identical(self, trained, movie_items):
        def run(seed):
            user = make_user(trained, movie_items,
                             make_profile(movie_items, seed=seed))
            dialogue = connect_dialogue(user, MockCRSAgent(movie_items),
                                        max_turns=30)
            return [(u.participant.value, u.text) for u in
                    dialogue.utterances]

        assert run(99) == run(99)

    def test_different_seeds_differ_somewhere(self, trained, movie_items):
        def run(seed):
            user = make_user(trained, movie_items,
                             make_profile(movie_items, seed=seed))
            dialogue = connect_dialogue(user, MockCRSAgent(movie_items),
                                        max_turns=30)
            return [u.text for u in dialogue.utterances]

        runs = {tuple(run(seed)) for seed in range(12)}
        assert len(runs) > 1

    def test_every_turn_is_traced(self, trained, movie_items):
        user = make_user(trained, movie_items,
                         make_profile(movie_items, seed=3))
        dialogue = connect_dialogue(user, MockCRSAgent(movie_items),
                                    max_turns=30)
        assert len(user.trace) == dialogue.turns


class GibberishAgent(DialogueParticipant):
    """Opens normally, then emits unclassifiable noise forever."""

    def respond(self, incoming):
        if incoming is None:
            return Response(WELCOME_TEXT)
        return Response("zzz blorp qwx")


class TestBoundedness:
    def test_gibberish_dialogue_always_ends_by_user(self, trained,
                                                    movie_items):
        profile = make_profile(movie_items, patience=3, cooperativeness=1.0)
        user = make_user(trained, movie_items, profile)
        dialogue = connect_dialogue(user, GibberishAgent(), max_turns=30)
        assert dialogue.metadata["terminated_by"] == "user"
        last_user = dialogue.user_utterances()[-1]
        assert last_user.intent == DONE
