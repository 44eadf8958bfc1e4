from .common import ArrayModel, BasisConvention, Chirality, ModelSpace, SpinLabel
from .representation import (CliffordTriple, DecompositionBlock, RepMatrices,
                             TensorDecomposition)
from .geometry import (ConePoint, ConnectionTerm, FrameSpec, H3Point, KillingBasis,
                       R3Point, S3Point, So4Splitting)
from .report import (H3Component, H3Solution, H3SolutionTable, IdentityCheck,
                     MatrixDump, MatrixSetDump,
                     OutputFormat, ReportSummary, Suite, SuiteConfig,
                     VerificationReport)
