from .load import (
    load_ensemble,
    load_json,
    load_manifest_covariances,
    load_manifest_signals,
    load_matrix,
    load_records,
    load_signals,
    read_manifest,
)
from .save import (
    save_ensemble,
    save_json,
    save_matrix,
    save_report,
    save_solution,
    to_jsonable,
)
