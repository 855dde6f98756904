"""routegen: MoonBoard 2017 route generation with a from-scratch VAE.

The package splits into small layers: ``board`` owns grid geometry and the
binary encoding, ``data`` the corpus files, ``nn`` and ``vae`` the numeric
core, ``generation`` the sampling-plus-validity pipeline, ``render`` the
board drawings, and ``cli``/``service`` the entry points.
"""

from .board import (
    COLS,
    GridCoord,
    HoldRole,
    NUM_HOLDS,
    Problem,
    ROWS,
    coord_to_index,
    format_position,
    grid_distance,
    index_to_coord,
    parse_position,
    problem_to_vector,
    vector_to_problem,
)
from .data import (
    Corpus,
    SplitSpec,
    corpus_stats,
    load_corpus,
    save_corpus,
    split_corpus,
    synth_corpus,
)
from .generation import (
    Candidate,
    GenConfig,
    ValidationReport,
    choose_k,
    generate_batch,
    is_duplicate,
    sample_latent,
    select_holds,
    validate_route,
)
from .nn import AdamState, LinearLayer, adam_step, finite_diff_check, relu, sigmoid
from .render import RenderStyle, render_ascii, render_svg
from .vae import (
    LossBreakdown,
    TrainConfig,
    TrainResult,
    VaeModel,
    decode,
    encode,
    load_checkpoint,
    loss_terms,
    reparameterize,
    save_checkpoint,
    train,
)

__version__ = "0.1.0"
