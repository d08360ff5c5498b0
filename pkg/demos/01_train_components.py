"""Train every simulator component from the bundled annotated sample.

The simulated user learns four things from a small annotated dialogue
sample: how to recognize the agent's intents (TF-IDF classifier over the
agent's side of the sample), how to spot slot values in agent utterances
(a lexicon cut from annotations plus the item catalog), how real users
sequence their intents (a smoothed first-order transition model), and how
they phrase each intent (templates harvested by cutting annotated slot
values out of the user's utterances).
"""

from crssim import (bundled, import_dialogues, load_domain,
                    load_interaction_model, load_item_collection,
                    train_simulator)

domain = load_domain(bundled.asset_path(bundled.DOMAIN))
items = load_item_collection(bundled.asset_path(bundled.ITEMS), domain)
model = load_interaction_model(bundled.asset_path(bundled.INTERACTION_MODEL))
sample = import_dialogues(bundled.asset_path(bundled.SAMPLE))

print(f"domain: {domain.name}, slots {domain.slots}")
print(f"items: {len(items)} titles, sample: {len(sample)} dialogues\n")

trained = train_simulator(sample, model, domain, items)

print("=== learned intent transitions (rows sum to 1) ===")
for current, row in sorted(trained.interaction_model.transitions
                           .to_dict().items()):
    cells = ", ".join(f"{nxt} {p:.3f}" for nxt, p in row.items())
    print(f"  {current:>9} -> {cells}")

print("\n=== a few harvested templates ===")
for intent in trained.interaction_model.user_intents:
    templates = trained.templates.templates_for(intent)
    best = sorted(templates, key=lambda t: t.pattern)[0]
    print(f"  {intent.label:>9} ({len(templates)} templates) "
          f"e.g. {best.pattern!r} [{best.polarity.value}/{best.bucket.value}]")

print("\n=== slot lexicon (first 8 surface forms) ===")
entries = trained.lexicon.to_dict()["entries"]
for surface in sorted(entries)[:8]:
    slot, value = entries[surface]
    print(f"  {surface!r:>18} -> {slot}={value}")
print(f"  ... {len(entries)} entries in total")

print("\n=== agent-intent classifier sanity probes ===")
from crssim import classify_intent  # noqa: E402

for probe in ("What genre of movie are you in the mood for?",
              "You should watch Alien.",
              "wibble wobble"):
    intent, similarity = classify_intent(trained.intent_model, probe)
    print(f"  {probe!r} -> {intent.label} (cosine {similarity:.3f})")
