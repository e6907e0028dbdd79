"""The arena: submission intake, evaluation dispatch, war runs, exports."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

from maestro.arena.csv_export import export_csv
from maestro.arena.entities import (
    ErrorRecord,
    EvaluationRecord,
    Submission,
    Submitter,
    WarMatchupRecord,
)
from maestro.arena.evaluator import Evaluator, validate_payload
from maestro.arena.protocol import SubmissionFailure
from maestro.arena.store import EventStore
from maestro.board.config import board_config_for
from maestro.clock import Clock
from maestro.config import JudgeConfig, PhaseConfig
from maestro.errors import ConfigError, DeadlineError, InputError, NotFoundError
from maestro.nn.weights_io import load_weights
from maestro.scoring import (
    WarMatrix,
    attack_subscores,
    defense_subscores,
    overall,
    validate_metric_map,
    war_overall,
)


class Arena:
    """Single judge instance bound to a config, store, and clock."""

    def __init__(self, config: JudgeConfig, store: EventStore | None = None, clock: Clock | None = None):
        self.config = config
        self.store = store or EventStore(config.store_dir)
        self.clock = clock or config.make_clock()
        self.evaluator = Evaluator(config, self.store, self.clock)
        for sc in config.submitters:
            self.store.add_submitter(
                Submitter(sc.id, sc.display_name, sc.kind, tuple(sc.members))
            )

    # -- lookups -----------------------------------------------------------

    def phase(self, name: str) -> PhaseConfig:
        try:
            return self.config.phases[name]
        except KeyError:
            raise NotFoundError(f"unknown phase '{name}'") from None

    def register_submitter(self, submitter: Submitter) -> None:
        self.store.add_submitter(submitter)

    def get_submission(self, submission_id: int) -> Submission:
        for phase in self.config.phases:
            for rec in self.store.of_type(phase, "submission"):
                if rec["id"] == submission_id:
                    return Submission.from_dict(rec)
        raise NotFoundError(f"unknown submission id {submission_id}")

    # -- submission lifecycle ------------------------------------------------

    def submit(self, submitter_id: str, phase_name: str, payload: dict) -> Submission:
        phase = self.phase(phase_name)
        submitter = self.store.get_submitter(submitter_id)
        if phase.kind == "war":
            raise InputError(
                f"phase '{phase_name}' is a war phase; it is scored from its source phases"
            )
        validate_payload(phase.kind, payload)
        now = self.clock.now()
        if now > phase.deadline:
            raise DeadlineError(phase_name, phase.deadline)
        submission = Submission(
            id=self.store.next_submission_id(),
            submitter_id=submitter.id,
            phase=phase_name,
            payload=payload,
            submitted_at=now,
        )
        self.store.append(phase_name, submission.to_dict())
        return submission

    def pending(self) -> list[Submission]:
        """Submissions with no evaluation or error record yet, oldest first."""
        out = []
        for phase in self.config.phases:
            done = {
                r["submission_id"]
                for r in self.store.records(phase)
                if r.get("record_type") in ("evaluation", "error")
            }
            for rec in self.store.of_type(phase, "submission"):
                if rec["id"] not in done:
                    out.append(Submission.from_dict(rec))
        return sorted(out, key=lambda s: s.id)

    def evaluate(self, submission_id: int) -> EvaluationRecord | ErrorRecord:
        """Run one submission; failures become ErrorRecords, never crashes here.

        Arena-internal problems (missing hidden models, bad config) are
        operator errors and propagate instead of being recorded.
        """
        submission = self.get_submission(submission_id)
        phase = self.phase(submission.phase)
        try:
            if phase.kind == "attack":
                metrics = self.evaluator.evaluate_attack(submission, phase)
                artifacts: dict[str, str] = {}
            elif phase.kind == "defense":
                metrics, artifacts = self.evaluator.evaluate_defense(submission, phase)
            else:
                raise InputError(f"war phase '{phase.name}' records come from run_war")
            validate_metric_map(phase.kind, metrics)
            record: EvaluationRecord | ErrorRecord = EvaluationRecord(
                submission_id=submission.id,
                submitter_id=submission.submitter_id,
                phase=submission.phase,
                metrics=metrics,
                eval_timestamp=metrics["eval_timestamp"],
                artifacts=artifacts,
            )
        except SubmissionFailure as failure:
            record = ErrorRecord(
                submission_id=submission.id,
                submitter_id=submission.submitter_id,
                phase=submission.phase,
                category=failure.category,
                message=str(failure),
                eval_timestamp=self.clock.now(),
            )
        self.store.append(submission.phase, record.to_dict())
        return record

    def process_pending(self, workers: int = 1) -> list[EvaluationRecord | ErrorRecord]:
        queue = self.pending()
        if workers <= 1:
            return [self.evaluate(s.id) for s in queue]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda s: self.evaluate(s.id), queue))

    # -- war -------------------------------------------------------------------

    def latest_evaluations(self, phase_name: str) -> list[dict]:
        """Last evaluation record per submitter (max timestamp, then max id)."""
        latest: dict[str, dict] = {}
        for rec in self.store.of_type(phase_name, "evaluation"):
            cur = latest.get(rec["submitter_id"])
            if cur is None or (rec["eval_timestamp"], rec["submission_id"]) > (
                cur["eval_timestamp"],
                cur["submission_id"],
            ):
                latest[rec["submitter_id"]] = rec
        return list(latest.values())

    def _qualifiers(self, phase_name: str, top_k: int | None) -> list[dict]:
        ranked = sorted(
            self.latest_evaluations(phase_name),
            key=lambda r: (-r["metrics"]["overall_score"], r["submitter_id"]),
        )
        return ranked[:top_k] if top_k is not None else ranked

    def run_war(self, phase_name: str, force: bool = False) -> dict:
        """Cross-evaluate qualifying attacks against qualifying defenses.

        Every (attack, defense) pair yields one matchup record carrying both
        sides' overall scores; per-submitter war records aggregate them.
        """
        phase = self.phase(phase_name)
        if phase.kind != "war":
            raise InputError(f"phase '{phase_name}' is not a war phase")
        attack_source = phase.sources["attack"]
        defense_source = phase.sources["defense"]
        if not force:
            now = self.clock.now()
            for source in (attack_source, defense_source):
                deadline = self.phase(source).deadline
                if now <= deadline:
                    raise InputError(
                        f"source phase '{source}' is still open (deadline {deadline}); "
                        "wait for the deadline or pass force"
                    )
        attackers = self._qualifiers(attack_source, phase.top_k)
        defenders = self._qualifiers(defense_source, phase.top_k)
        if not attackers or not defenders:
            raise ConfigError(
                f"war needs qualifiers on both sides "
                f"(attacks: {len(attackers)}, defenses: {len(defenders)})",
                f"/phases/{phase_name}",
            )

        attack_weights = self.config.score_weights("attack")
        defense_weights = self.config.score_weights("defense")
        matrix = WarMatrix(
            attackers=[a["submitter_id"] for a in attackers],
            defenders=[d["submitter_id"] for d in defenders],
        )
        matchups = 0
        for a_rec in attackers:
            a_sub = self.get_submission(a_rec["submission_id"])
            for d_rec in defenders:
                hardened = load_weights(
                    self.store.root / d_rec["artifacts"]["hardened_weights"], self.config.model
                )
                raw = self.evaluator.measure_attack_on(hardened, a_sub.payload, a_sub.id)
                att_scores = attack_subscores(raw, attack_weights)
                att_overall = overall(att_scores, attack_weights)
                def_metrics = {
                    "clean_acc": d_rec["metrics"]["clean_acc"],
                    "base_clean_acc": d_rec["metrics"]["base_clean_acc"],
                    "robust_acc_matchup": raw["adv_acc"],
                    "overhead_s": d_rec["metrics"]["overhead_s"],
                }
                def_scores = defense_subscores(def_metrics, defense_weights)
                def_overall = overall(def_scores, defense_weights)
                pair = (a_rec["submitter_id"], d_rec["submitter_id"])
                matrix.attack_overall[pair] = att_overall
                matrix.defense_overall[pair] = def_overall
                matchup = WarMatchupRecord(
                    attack_submission_id=a_rec["submission_id"],
                    defense_submission_id=d_rec["submission_id"],
                    attack_submitter=pair[0],
                    defense_submitter=pair[1],
                    phase=phase_name,
                    metrics={
                        "attack_overall": att_overall,
                        "defense_overall": def_overall,
                        "adv_acc": raw["adv_acc"],
                        "clean_acc": raw["clean_acc"],
                        "mean_l2": raw["mean_l2"],
                        "queries": raw["queries"],
                        "runtime_s": raw["runtime_s"],
                    },
                    eval_timestamp=self.clock.now(),
                )
                self.store.append(phase_name, matchup.to_dict())
                matchups += 1

        scores = war_overall(matrix, self.config.war_weights)
        attack_ids = {a["submitter_id"]: a["submission_id"] for a in attackers}
        defense_ids = {d["submitter_id"]: d["submission_id"] for d in defenders}
        for submitter_id, score in scores.items():
            metrics: dict[str, float] = {}
            count = 0
            if score.attack_side is not None:
                metrics["attack_side"] = score.attack_side
                count += len(defenders)
            if score.defense_side is not None:
                metrics["defense_side"] = score.defense_side
                count += len(attackers)
            metrics["matchups"] = float(count)
            metrics["overall_score"] = score.combined
            metrics["eval_timestamp"] = self.clock.now()
            record = EvaluationRecord(
                submission_id=attack_ids.get(submitter_id, defense_ids.get(submitter_id, 0)),
                submitter_id=submitter_id,
                phase=phase_name,
                metrics=metrics,
                eval_timestamp=metrics["eval_timestamp"],
            )
            self.store.append(phase_name, record.to_dict())
        return {
            "attackers": len(attackers),
            "defenders": len(defenders),
            "matchups": matchups,
            "submitters_scored": len(scores),
        }

    # -- exports -----------------------------------------------------------------

    def export_csv(self, phase_name: str) -> str:
        phase = self.phase(phase_name)
        cfg = board_config_for(phase.kind, self.config)
        records = self.store.of_type(phase_name, "evaluation")
        return export_csv(records, [m.name for m in cfg.metrics], phase_name)
