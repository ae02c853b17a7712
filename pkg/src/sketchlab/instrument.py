"""Optional operation counters.

Pass a Counters object to a kernel wrapper to receive the instrumented
multiply-accumulate count of its accumulation loops, the derived flop total,
and the auxiliary bytes the call allocated. Kernels count the iterations they
actually execute; the budget tests compare those counts to the published
formulas exactly.
"""

from dataclasses import dataclass, field


@dataclass
class Counters:
    macs: int = 0
    flops: int = 0
    rng_draws: int = 0
    aux_bytes: int = 0
    extra: dict = field(default_factory=dict)

    def add(self, macs=0, flops=0, rng_draws=0, aux_bytes=0):
        self.macs += int(macs)
        self.flops += int(flops)
        self.rng_draws += int(rng_draws)
        self.aux_bytes = max(self.aux_bytes, int(aux_bytes))
