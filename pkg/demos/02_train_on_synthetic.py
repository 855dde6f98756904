"""Train the VAE on a synthetic corpus and watch the three loss terms.

The real MoonBoard corpus is proprietary, so the demos run on synthetic
chain routes (6..12 holds, one finish on the top row, start below row 7,
every move within reach). The same pipeline applies to a real export in
the corpus JSONL format.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import numpy as np

import routegen as rg
from routegen import vae
from _common import CORPUS_PATH, MODEL_PATH, OUT_DIR

OUT_DIR.mkdir(exist_ok=True)

corpus = rg.synth_corpus(seed=5, n=64)
rg.save_corpus(corpus, CORPUS_PATH)
stats = rg.corpus_stats(corpus)
print(f"corpus: {stats.n_problems} problems, "
      f"{stats.hold_count_min}-{stats.hold_count_max} holds "
      f"(mean {stats.hold_count_mean:.1f})")

model = rg.VaeModel.create(seed=0)
print(f"model: 198 -> 256 -> 64 -> (16, 16) -> 16 -> 64 -> 256 -> 198, "
      f"{model.n_params} parameters")

config = rg.TrainConfig(epochs=500, batch_size=8, learning_rate=3e-3,
                        seed=50, noise_draws=4)
result = rg.train(model, corpus, config)

print("\nepoch    binary     count        kl     total")
for e in (0, 1, 2, 5, 10, 20, 50, 100, 200, 350, 499):
    h = result.history[e]
    print(f"{e:5d} {h.binary:9.2f} {h.count:9.2f} {h.kl:9.2f} {h.total:9.2f}")

vae.save_checkpoint(model, MODEL_PATH, training={"epochs": config.epochs,
                                                 "seed": config.seed})
vae.write_loss_csv(result.history, OUT_DIR / "loss.csv")
print(f"\ncheckpoint -> {MODEL_PATH}")
print(f"loss log   -> {OUT_DIR / 'loss.csv'}")

# sanity: the trained decoder reconstructs most training routes from the
# posterior mean alone
good = 0
for problem in corpus:
    x = rg.problem_to_vector(problem).astype(np.float64)
    mu, _ = rg.encode(model, x)
    bits = rg.select_holds(rg.decode(model, mu), problem.hold_count)
    if np.sum(bits * x) / problem.hold_count >= 0.9:
        good += 1
print(f"reconstruction: {good}/{len(corpus)} problems recover >=90% of holds")
