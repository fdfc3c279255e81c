from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence

from thermal_qfi.errors import DomainError


@dataclass
class ParallelConfig:
    mode: str = "thread"   # thread | process | none
    max_workers: int = 4

    @classmethod
    def from_config(cls, section: Optional[Dict[str, Any]]) -> "ParallelConfig":
        s = section or {}
        return cls(mode=str(s.get("mode", "thread")), max_workers=int(s.get("max_workers", 4)))

    def checked_mode(self) -> str:
        mode = (self.mode or "thread").lower()
        if mode not in ("thread", "process", "none"):
            raise DomainError(f"Unknown parallel mode: {self.mode}")
        return mode


def parallel_map(
    fn: Callable[[Any], Any],
    items: Sequence[Any],
    cfg: Optional[ParallelConfig] = None,
    progress: bool = False,
    desc: str = "",
) -> List[Any]:
    """
    Order-preserving map. Results are collected by input index, so the
    output never depends on completion order or worker count.
    - thread mode: numpy releases the GIL inside LAPACK calls
    - process mode: `fn` and items must be picklable
    """
    cfg = cfg or ParallelConfig()
    mode = cfg.checked_mode()

    bar = None
    if progress:
        from tqdm import tqdm
        bar = tqdm(total=len(items), desc=desc or None, leave=False)

    def _tick(it):
        for x in it:
            if bar is not None:
                bar.update(1)
            yield x

    try:
        if mode == "none" or len(items) == 0 or cfg.max_workers <= 1:
            return list(_tick(fn(x) for x in items))

        if mode == "thread":
            from concurrent.futures import ThreadPoolExecutor
            with ThreadPoolExecutor(max_workers=int(cfg.max_workers)) as ex:
                return list(_tick(ex.map(fn, items)))

        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=int(cfg.max_workers)) as ex:
            return list(_tick(ex.map(fn, items)))
    finally:
        if bar is not None:
            bar.close()
