"""Build a tiny corpus, chat with it, and watch it learn.

Run from the repository root:

    python3 demos/quickstart.py
"""

from nextline import Engine, EngineConfig, build_corpus

# An "episode" is just an ordered list of utterances; the reply to any line
# is simply the line that follows it.
corpus = build_corpus(
    [
        (
            "episode1.srt",
            [
                "hello there",
                "hi how are you",
                "i am fine thanks",
                "glad to hear it",
            ],
        ),
        (
            "episode2.srt",
            [
                "what are you reading",
                "an old detective novel",
                "any good",
                "the butler did it",
            ],
        ),
    ]
)

engine = Engine(corpus, EngineConfig(strategy="lev"))
session = engine.session("quickstart")


def turn(text: str) -> str:
    reply = engine.respond(session, text)
    score = f" d={reply.match.score:g}" if reply.match else ""
    print(f"you: {text}")
    print(f"bot: {reply.text}  [{reply.provenance}{score}]")
    print()
    return reply.text


print("--- retrieval: closest line wins, reply is its successor ---\n")
turn("hello there")            # exact hit
turn("what are you reeding")   # one typo away, still matches
turn("any good?")              # punctuation-tolerant

print("--- fallback: no near line, so the message is mirrored ---\n")
turn("I made this for you")

print("--- learning: say something after the bot, then ask it back ---\n")
opener = turn("flibber jabberwock nonsense")   # mirror fallback; bot says it back
turn("that means good morning here")           # taught: (opener -> this line)

fresh = engine.session("second-visit")
reply = engine.respond(fresh, opener)
print(f"new session asks: {opener}")
print(f"bot: {reply.text}  [{reply.provenance}]")
print()
print("stats:", engine.stats())
