import numpy as np
import pytest

import routegen as rg


@pytest.fixture(scope="session")
def small_trained():
    """A lightly trained model on 16 synthetic problems, shared read-only."""
    corpus = rg.synth_corpus(seed=5, n=16)
    model = rg.VaeModel.create(seed=1)
    config = rg.TrainConfig(epochs=60, batch_size=8, learning_rate=3e-3,
                            seed=2, noise_draws=2)
    rg.train(model, corpus, config)
    return model, corpus


@pytest.fixture(scope="session")
def overfit_single():
    """A model memorizing one problem, for reconstruction oracles."""
    corpus = rg.synth_corpus(seed=9, n=1)
    model = rg.VaeModel.create(seed=3)
    config = rg.TrainConfig(epochs=400, batch_size=1, learning_rate=3e-3,
                            seed=4, noise_draws=4)
    rg.train(model, corpus, config)
    return model, corpus


def reconstruct_holds(model, problem):
    """decode(encoder mean) with k = the problem's true hold count."""
    x = rg.problem_to_vector(problem).astype(np.float64)
    mu, _ = rg.encode(model, x)
    probs = rg.decode(model, mu)
    bits = rg.select_holds(probs, problem.hold_count)
    return bits
