# -*- coding: utf-8 -*-
"""
Zamanlayıcılar
==============

- KLAnnealer: KL ağırlığı ilk epoch boyunca 0'dan hedefe doğrusal, sonra sabit
- exponential_gamma: epoch başına geometrik lr azalması (son epoch'ta tabana ulaşır)
- warmup_inverse_sqrt: ısınma + ters karekök azalma (arranger Transformer'ı)
"""

import math
from typing import Callable


class KLAnnealer:
    def __init__(self, target: float = 0.1, warmup_steps: int = 1) -> None:
        if target < 0:
            raise ValueError("target must be >= 0")
        self.target = target
        self.warmup_steps = max(1, int(warmup_steps))

    def __call__(self, step: int) -> float:
        if self.warmup_steps <= 1:
            return self.target
        return self.target * min(1.0, step / (self.warmup_steps - 1))


def exponential_gamma(lr_start: float, lr_floor: float, epochs: int) -> float:
    """lr_start * gamma**(epochs-1) == lr_floor olacak çarpan."""
    if epochs <= 1:
        return 1.0
    return (lr_floor / lr_start) ** (1.0 / (epochs - 1))


def warmup_inverse_sqrt(warmup_steps: int, base_lr: float, floor_lr: float = 1e-5) -> Callable[[int], float]:
    """LambdaLR çarpanı; tepe noktası `warmup_steps` adımında base_lr."""
    warmup = max(1, int(warmup_steps))
    floor = min(1.0, floor_lr / base_lr)

    def factor(step: int) -> float:
        s = step + 1
        scale = s / warmup if s < warmup else math.sqrt(warmup / s)
        return max(scale, floor)

    return factor
