"""Exact dynamic mode decomposition with delay embedding for short-term forecasting."""

from .dmd import (
    DelayedDmdModel,
    DmdModel,
    FitOptions,
    fit,
    fit_delayed,
    forecast,
    forecast_delayed,
    load_model,
    predict_state,
    reconstruct,
    reconstruct_delayed,
    save_model,
)
from .embedding import EmbeddedTrajectory, Trajectory, extract_block, hankel_embed, latest_frame
from .metrics import ErrorSummary, PredictionPair, kl_divergence, mse, per_frame_errors

__version__ = "0.1.0"
