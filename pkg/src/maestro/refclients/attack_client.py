"""External attack client speaking the judge's line-JSON protocol on stdio.

Implements the same sign-step math as the in-process reference attacks, so
a run through the wire produces bit-identical perturbations.

Usage: python -m maestro.refclients.attack_client --method fgsm|pgd
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from maestro.attacks.gradient import _sign_step
from maestro.rng import Rng, derive_seed


def _send(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc) + "\n")
    sys.stdout.flush()


def _recv() -> dict:
    line = sys.stdin.readline()
    if not line:
        raise SystemExit("judge closed the stream")
    doc = json.loads(line)
    if doc.get("type") == "error":
        raise SystemExit(f"judge error: {doc.get('error')}")
    return doc


def _gradient(images: np.ndarray, labels: list[int]) -> np.ndarray:
    _send({"type": "gradient", "images": images.tolist(), "labels": labels})
    reply = _recv()
    if reply.get("type") != "gradients":
        raise SystemExit(f"expected gradients, got {reply.get('type')}")
    return np.asarray(reply["grads"], dtype=np.float32)


def run(method: str) -> None:
    task = _recv()
    if task.get("type") != "attack_task":
        raise SystemExit(f"expected attack_task, got {task.get('type')}")
    x = np.asarray(task["images"], dtype=np.float32)
    labels = [int(v) for v in task["labels"]]
    epsilon = float(task["epsilon"])

    if method == "fgsm":
        grad = _gradient(x, labels)
        perturbed = _sign_step(x, x, grad, epsilon, epsilon)
    else:
        step = float(task["step_size"])
        iterations = int(task["iterations"])
        seed = int(task.get("seed", 0))
        current = x
        if task.get("random_start") and epsilon > 0:
            deltas = np.empty_like(x)
            for i in range(len(x)):
                rng = Rng(derive_seed(seed, f"pgd-start-{i}"))
                deltas[i] = rng.uniform_range(x.shape[1], -epsilon, epsilon).astype(np.float32)
            current = np.clip(np.clip(x + deltas, x - np.float32(epsilon), x + np.float32(epsilon)), 0, 1)
        for _ in range(iterations):
            grad = _gradient(current, labels)
            current = _sign_step(x, current, grad, step, epsilon)
        perturbed = current
    _send({"type": "result", "perturbed": perturbed.tolist()})


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--method", choices=["fgsm", "pgd"], default="fgsm")
    args = parser.parse_args()
    run(args.method)


if __name__ == "__main__":
    main()
