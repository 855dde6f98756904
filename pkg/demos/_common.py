"""Shared setup for the demo scripts: a small trained checkpoint in
demos/out/ that the later demos reuse (02 writes the real one; anything
else trains a quick stand-in if it is missing)."""

from pathlib import Path

import routegen as rg
from routegen import vae

OUT_DIR = Path(__file__).resolve().parent / "out"
MODEL_PATH = OUT_DIR / "model.ckpt"
CORPUS_PATH = OUT_DIR / "corpus.jsonl"


def ensure_demo_model(epochs: int = 500):
    """Return (model, corpus), training and caching them on first use."""
    OUT_DIR.mkdir(exist_ok=True)
    if MODEL_PATH.exists() and CORPUS_PATH.exists():
        model, _ = vae.load_checkpoint(MODEL_PATH)
        return model, rg.load_corpus(CORPUS_PATH)
    corpus = rg.synth_corpus(seed=5, n=64)
    rg.save_corpus(corpus, CORPUS_PATH)
    model = rg.VaeModel.create(seed=0)
    config = rg.TrainConfig(epochs=epochs, batch_size=8, learning_rate=3e-3,
                            seed=50, noise_draws=4)
    print(f"training demo model ({epochs} epochs on {len(corpus)} synthetic problems)...")
    result = rg.train(model, corpus, config)
    print(f"  final loss {result.history[-1].total:.2f}")
    vae.save_checkpoint(model, MODEL_PATH, training={"epochs": epochs, "seed": 50})
    return model, corpus
