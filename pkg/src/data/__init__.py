from src.data.dataset import Dataset, load_table, save_table
from src.data.preprocessing import (
    MinMaxScaler,
    PcaModel,
    apply_pca,
    apply_scaler,
    fit_pca,
    fit_scaler,
    invert_scaler,
)
from src.data.splitting import SplitSpec, split, split_indices
from src.data.synthetic import synth_dataset

__all__ = [
    "Dataset",
    "load_table",
    "save_table",
    "MinMaxScaler",
    "PcaModel",
    "apply_pca",
    "apply_scaler",
    "fit_pca",
    "fit_scaler",
    "invert_scaler",
    "SplitSpec",
    "split",
    "split_indices",
    "synth_dataset",
]
