from rank1det.dense import DenseMatrix, det_cofactor, det_dense, det_dense_exact, det_dense_float, logdet_dense_float
from rank1det.fubini_study import (
    ChartPoint,
    EinsteinReport,
    fs_det_closed_form,
    fs_einstein_check,
    fs_log_det,
    fs_metric_matrix,
    fs_rank1_params,
    fs_ricci_fd,
)
from rank1det.rank1 import (
    EvalPath,
    Evaluation,
    ExpansionSubset,
    Rank1System,
    det_by_expansion,
    det_corrected,
    det_division_free,
    det_erroneous,
    evaluate_corrected,
    expansion_term,
    logdet_corrected,
    to_dense,
)
from rank1det.scalars import GaussianRational, ScalarKind

__version__ = "0.1.0"
