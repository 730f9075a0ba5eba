from .bus import Bus, Message, drop_from, tamper
from .committee import (
    Committee,
    DealerPost,
    GrantEvent,
    GrantLog,
    HandoffTranscript,
    ZeroContribution,
    check_zero_contribution,
    dpss_open_and_keygen,
    dpss_zero_poly,
    key_id,
    make_zero_contribution,
    verify_transcript,
)
from .sharing import (
    Bivariate,
    CommitteeConfig,
    DpssError,
    FullShare,
    HandoffError,
    ReducedShare,
    ShareBoard,
    dpss_open,
    dpss_share,
)
