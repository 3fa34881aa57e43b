"""
Chunked parallel execution of sampling tasks.

Samples are split into fixed-size chunks; chunk i always draws from stream
index i of the master seed, so results are identical for any worker count.
"""
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Tuple, TypeVar

from tqdm import tqdm

from config import Config
from core.sampling.rng import RngStream

R = TypeVar("R")

ChunkTask = Callable[[RngStream, int], R]


def plan_chunks(total: int, chunk_size: int = None) -> List[Tuple[int, int]]:
    """(stream index, sample count) for each chunk."""
    size = chunk_size or Config.CHUNK_SIZE
    return [(i, min(size, total - start)) for i, start in enumerate(range(0, total, size))]


def _run_chunk(args) -> R:
    task, seed, index, count = args
    return task(RngStream(seed, index), count)


def run_chunks(task: ChunkTask, total: int, seed: int, workers: int = 1,
               chunk_size: int = None, verbose: bool = False, desc: str = "sampling") -> List[R]:
    """
    Run task(rng, count) over all chunks and return the results in chunk order.

    Args:
        task: Picklable callable (module-level function or functools.partial)
        total: Total number of samples
        seed: Master seed
        workers: Process count; 1 runs in-process
        chunk_size: Samples per chunk (defaults to Config.CHUNK_SIZE)
        verbose: Show a tqdm bar over completed chunks
        desc: Progress bar label
    """
    jobs = [(task, seed, index, count) for index, count in plan_chunks(total, chunk_size)]
    if workers <= 1 or len(jobs) <= 1:
        results = map(_run_chunk, jobs)
        return list(tqdm(results, total=len(jobs), desc=desc, disable=not verbose))

    with ProcessPoolExecutor(max_workers=workers) as executor:
        # map preserves submission order
        results = executor.map(_run_chunk, jobs)
        return list(tqdm(results, total=len(jobs), desc=desc, disable=not verbose))
