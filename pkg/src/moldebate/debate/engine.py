"""The multi-round debate state machine.

Each round runs proposal -> critique (self, then cross) -> voting, then the
votes are aggregated into a global ranking and the termination rule is
checked.  Within a phase, agent calls fan out over a thread pool up to the
configured parallelism; results are merged in sorted agent-id order
regardless of completion order, and only the single-threaded coordinator
mutates the state between phases.  With a scripted backend and fixed seeds
the whole run is reproducible byte-for-byte (timestamps aside) at any
parallelism.
"""

from __future__ import annotations

import random
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from ..backend.base import Backend, ChatRequest, RequestTag
from ..backend.parsing import (
    CritiqueEntry,
    parse_ballot,
    parse_critiques,
    parse_proposals,
)
from ..backend.templates import PromptTemplate, load_template, render
from ..chem import Fingerprint, morgan_fingerprint, parse
from ..errors import BallotParseError, EmptyParseError, OracleError
from ..metrics import MetricConfig, int_div_fingerprints, num_circles_fingerprints
from ..persistence import RunWriter
from ..profiles import ExpertiseProfile, TaskSpec
from .types import (
    Candidate,
    Critique,
    DebateConfig,
    DebateResult,
    DebateState,
    ScoreTriple,
)

__all__ = ["DebateEngine", "aggregate_votes", "should_terminate", "run_debate"]


def _canonical_or_none(smiles: str) -> str | None:
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return parse(smiles).canonical
    except Exception:
        return None


def should_terminate(state: DebateState, config: DebateConfig) -> str | None:
    """Termination reason at the end of a round, or None to continue.

    The candidate budget is checked before the round limit.
    """
    if len(state.pool) >= config.candidate_budget:
        return "budget_reached"
    if state.round >= config.max_rounds:
        return "max_rounds"
    return None


def aggregate_votes(pool: dict[str, Candidate]) -> list[str]:
    """Global ranking: vote count desc, mean of agent means desc, then
    lexicographic canonical SMILES.  Total and deterministic."""
    return sorted(
        pool,
        key=lambda canonical: (
            -pool[canonical].vote_count,
            -pool[canonical].mean_score(),
            canonical,
        ),
    )


@dataclass
class _Agent:
    scientist_id: str
    profile: ExpertiseProfile
    system_prompt: str


def _profile_block(profile: ExpertiseProfile) -> str:
    if profile.mode == "vanilla":
        return "No background profile is provided; reason from general chemical knowledge."
    if profile.mode == "role":
        return profile.role
    if profile.mode == "keyword":
        return "Your research interests: " + ", ".join(profile.keywords)
    lines = []
    if profile.publications:
        lines.append("Your publication history:")
        for title, abstract in profile.publications:
            lines.append(f"- {title}: {abstract}")
    if profile.molecules:
        lines.append("Molecules you previously discovered (SMILES):")
        for canonical in profile.molecules:
            lines.append(f"- {canonical}")
    if not lines:
        lines.append("Your research record is empty.")
    return "\n".join(lines)


class DebateEngine:
    def __init__(
        self,
        config: DebateConfig,
        task: TaskSpec,
        profiles: list[ExpertiseProfile],
        backend: Backend,
        oracle=None,
        writer: RunWriter | None = None,
        metric_config: MetricConfig = MetricConfig(),
        template_dir: str | None = None,
        temperature: float = 0.7,
        model: str | None = None,
        max_tokens: int | None = None,
    ):
        if len(profiles) != config.n_scientists:
            raise ValueError(
                f"got {len(profiles)} profiles for n_scientists={config.n_scientists}"
            )
        self.config = config
        self.task = task
        self.backend = backend
        self.oracle = oracle
        self.writer = writer
        self.metric_config = metric_config
        self._temperature = temperature
        self._model = model
        self._max_tokens = max_tokens
        self._templates: dict[str, PromptTemplate] = {
            name: load_template(name, template_dir)
            for name in (
                "scientist_system",
                "proposal",
                "critique_self",
                "critique_cross",
                "voting",
                f"task_{task.objective}",
            )
        }
        self._task_block = self._render_task_block()
        system_template = self._templates["scientist_system"]
        self.agents = [
            _Agent(
                scientist_id=profile.scientist_id,
                profile=profile,
                system_prompt=render(
                    system_template,
                    {
                        "scientist_name": profile.scientist_id,
                        "profile_block": _profile_block(profile),
                    },
                ),
            )
            for profile in sorted(profiles, key=lambda p: p.scientist_id)
        ]
        self.state = DebateState()
        self.transcript: list[dict] = []
        self.round_metrics: list[dict] = []
        self.stats = {
            "proposals_accepted": 0,
            "proposals_dropped_invalid": 0,
            "duplicate_proposals": 0,
            "repair_prompts": 0,
            "replacements": 0,
            "invalid_replacements": 0,
            "ballot_abstentions": 0,
            "skipped_critiques": 0,
        }
        self._fingerprints: dict[str, Fingerprint] = {}
        self._last_ranking: list[str] = []
        # agent id -> canonicals accepted this round (rebuilt every round)
        self._round_proposals: dict[str, list[str]] = {}

    # -- plumbing -----------------------------------------------------------

    def _render_task_block(self) -> str:
        bindings: dict[str, object] = {"description": self.task.description}
        if self.task.objective == "lead_optimization":
            constraints = self.task.constraints
            bindings.update(
                {
                    "seed": self.task.seed,
                    "min_qed": constraints.min_qed if constraints else 0.6,
                    "max_sa": constraints.max_sa if constraints else 4.0,
                    "min_sim": constraints.min_sim if constraints else 0.6,
                }
            )
        return render(self._templates[f"task_{self.task.objective}"], bindings)

    def _complete(self, agent: _Agent, phase: str, prompt: str) -> str:
        request = ChatRequest(
            messages=(("system", agent.system_prompt), ("user", prompt)),
            temperature=self._temperature,
            model=self._model,
            max_tokens=self._max_tokens,
            tag=RequestTag(agent=agent.scientist_id, round=self.state.round, phase=phase),
        )
        return self.backend.complete(request)

    def _fan_out(self, worker, items: list):
        """Run ``worker`` over ``items``, results in item order."""
        if self.config.parallelism == 1 or len(items) <= 1:
            return [worker(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.config.parallelism) as pool:
            return list(pool.map(worker, items))

    def _event(self, phase: str, agent: str | None, payload: dict) -> None:
        event = {
            "ts": time.time(),
            "round": self.state.round,
            "phase": phase,
            "agent": agent,
            "payload": payload,
        }
        self.transcript.append(event)
        if self.writer is not None:
            self.writer.append_transcript(event)

    def _flush(self) -> None:
        if self.writer is not None:
            self.writer.flush()

    def _fingerprint(self, canonical: str) -> Fingerprint:
        fp = self._fingerprints.get(canonical)
        if fp is None:
            fp = morgan_fingerprint(
                parse(canonical),
                radius=self.metric_config.fp_radius,
                nbits=self.metric_config.fp_nbits,
            )
            self._fingerprints[canonical] = fp
        return fp

    def _add_candidate(self, candidate: Candidate) -> bool:
        added = self.state.add_candidate(candidate)
        if added and self.writer is not None:
            self.writer.append_pool(
                {
                    "canonical": candidate.canonical,
                    "proposer": candidate.proposer,
                    "round": candidate.round_proposed,
                    "replaced_from": candidate.replaced_from,
                }
            )
        return added

    # -- proposal phase -----------------------------------------------------

    def _history_block(self) -> str:
        if not self._last_ranking:
            return "This is the first round: there are no prior candidates."
        lines = ["Top candidates and critiques from previous rounds:"]
        for canonical in self._last_ranking[:10]:
            candidate = self.state.pool[canonical]
            lines.append(
                f"- {canonical} (votes {candidate.vote_count}, "
                f"mean score {candidate.mean_score():.3f})"
            )
            for critique in candidate.critiques[-3:]:
                lines.append(f"  critique by {critique.critic}: {critique.text}")
        return "\n".join(lines)

    def _propose_worker(self, history_block: str):
        k = self.config.proposals_per_agent

        def worker(agent: _Agent) -> dict:
            prompt = render(
                self._templates["proposal"],
                {
                    "task_block": self._task_block,
                    "round": self.state.round,
                    "k": k,
                    "history_block": history_block,
                },
            )
            accepted: list[tuple[str, str]] = []
            invalid: list[str] = []
            unparseable = False
            try:
                entries = parse_proposals(self._complete(agent, "proposal", prompt), k)
            except EmptyParseError:
                entries = []
                unparseable = True
            for smiles, rationale in entries:
                canonical = _canonical_or_none(smiles)
                if canonical is None:
                    invalid.append(smiles)
                else:
                    accepted.append((canonical, rationale))
            repair_used = False
            dropped = 0
            if unparseable or invalid:
                repair_used = True
                if unparseable:
                    reason = (
                        "Your previous reply could not be parsed. Reply again with "
                        "only a fenced JSON array of {\"smiles\", \"rationale\"} objects."
                    )
                else:
                    listed = ", ".join(repr(s) for s in invalid)
                    reason = (
                        f"These SMILES from your reply are invalid: {listed}. "
                        "Reply with corrected candidates as a fenced JSON array of "
                        "{\"smiles\", \"rationale\"} objects."
                    )
                try:
                    repair_entries = parse_proposals(
                        self._complete(agent, "proposal_repair", f"{reason}\n\n{prompt}"),
                        k,
                    )
                except EmptyParseError:
                    repair_entries = []
                for smiles, rationale in repair_entries:
                    if len(accepted) >= k:
                        break
                    canonical = _canonical_or_none(smiles)
                    if canonical is None:
                        dropped += 1
                    else:
                        accepted.append((canonical, rationale))
                dropped += max(0, len(invalid) - len(repair_entries))
            return {
                "agent": agent.scientist_id,
                "proposals": accepted[:k],
                "dropped_invalid": dropped,
                "repair_used": repair_used,
            }

        return worker

    def proposal_phase(self) -> None:
        outcomes = self._fan_out(self._propose_worker(self._history_block()), self.agents)
        self._round_proposals = {}
        for outcome in outcomes:
            agent_id = outcome["agent"]
            accepted_canonicals = []
            for canonical, rationale in outcome["proposals"]:
                rationale_entry = {
                    "agent": agent_id,
                    "round": self.state.round,
                    "text": rationale,
                }
                if canonical in self.state.pool:
                    self.state.pool[canonical].rationales.append(rationale_entry)
                    self.stats["duplicate_proposals"] += 1
                else:
                    self._add_candidate(
                        Candidate(
                            canonical=canonical,
                            proposer=agent_id,
                            round_proposed=self.state.round,
                            rationales=[rationale_entry],
                        )
                    )
                accepted_canonicals.append(canonical)
                self.stats["proposals_accepted"] += 1
            self._round_proposals[agent_id] = accepted_canonicals
            self.stats["proposals_dropped_invalid"] += outcome["dropped_invalid"]
            if outcome["repair_used"]:
                self.stats["repair_prompts"] += 1
            self._event(
                "proposal",
                agent_id,
                {
                    "accepted": accepted_canonicals,
                    "dropped_invalid": outcome["dropped_invalid"],
                    "repair_used": outcome["repair_used"],
                },
            )
        self._flush()

    # -- critique phase -----------------------------------------------------

    def _self_critique_worker(self):
        def worker(agent: _Agent) -> dict:
            own = self._round_proposals.get(agent.scientist_id, [])
            lines = []
            for canonical in own:
                lines.append(f"- {canonical}")
            if self.config.self_critique_oracle_property and self.oracle is not None:
                prop = self.config.self_critique_oracle_property
                try:
                    estimates = self.oracle.score_batch(prop, own)
                    lines.append(f"Current oracle estimates ({prop}):")
                    for canonical, value in zip(own, estimates):
                        lines.append(f"- {canonical}: {value:.4f}")
                except OracleError:
                    lines.append(f"(oracle estimates for {prop} unavailable)")
            prompt = render(
                self._templates["critique_self"],
                {
                    "task_block": self._task_block,
                    "round": self.state.round,
                    "own_candidates_block": "\n".join(lines),
                },
            )
            entries, skipped = self._critique_entries(agent, "critique_self", prompt)
            return {"agent": agent.scientist_id, "entries": entries, "skipped": skipped}

        return worker

    def _critique_entries(
        self, agent: _Agent, phase: str, prompt: str
    ) -> tuple[list[CritiqueEntry], bool]:
        """One parse attempt plus one repair; a second failure skips the agent."""
        try:
            return parse_critiques(self._complete(agent, phase, prompt)), False
        except EmptyParseError:
            pass
        retry_prompt = (
            "Your previous reply could not be parsed. Reply again with only a "
            "fenced JSON array of critique objects.\n\n" + prompt
        )
        try:
            return (
                parse_critiques(self._complete(agent, f"{phase}_repair", retry_prompt)),
                False,
            )
        except EmptyParseError:
            return [], True

    def _apply_self_critiques(self, agent_id: str, entries: list[CritiqueEntry]) -> dict:
        own = set(self._round_proposals.get(agent_id, []))
        applied = []
        replacements = []
        for entry in entries:
            canonical = _canonical_or_none(entry.smiles)
            if canonical is None or canonical not in own:
                continue
            candidate = self.state.pool[canonical]
            candidate.critiques.append(
                Critique(critic=agent_id, round=self.state.round, text=entry.critique)
            )
            applied.append(canonical)
            if entry.replacement is None:
                continue
            replacement = _canonical_or_none(entry.replacement)
            if replacement is None:
                self.stats["invalid_replacements"] += 1
                continue
            if replacement == canonical:
                continue
            if replacement not in self.state.pool:
                self._add_candidate(
                    Candidate(
                        canonical=replacement,
                        proposer=agent_id,
                        round_proposed=self.state.round,
                        rationales=[
                            {
                                "agent": agent_id,
                                "round": self.state.round,
                                "text": f"self-critique replacement of {canonical}",
                            }
                        ],
                        replaced_from=canonical,
                    )
                )
            candidate.replaced_by = replacement
            self._round_proposals[agent_id].append(replacement)
            self.stats["replacements"] += 1
            replacements.append({"from": canonical, "to": replacement})
        return {"critiqued": applied, "replacements": replacements}

    def _cross_samples(self) -> dict[str, list[str]]:
        """Seeded per-agent samples of peers' candidates (own excluded)."""
        samples = {}
        pool_order = list(self.state.pool)
        for agent in self.agents:
            peers = [
                canonical
                for canonical in pool_order
                if self.state.pool[canonical].proposer != agent.scientist_id
            ]
            size = min(len(peers), self.config.cross_sample)
            if size == 0:
                samples[agent.scientist_id] = []
                continue
            rng = random.Random(
                f"{self.config.seed}:{self.state.round}:{agent.scientist_id}:cross"
            )
            samples[agent.scientist_id] = rng.sample(peers, size)
        return samples

    def _cross_critique_worker(self, samples: dict[str, list[str]]):
        def worker(agent: _Agent) -> dict:
            sample = samples[agent.scientist_id]
            if not sample:
                return {"agent": agent.scientist_id, "entries": [], "skipped": False}
            lines = []
            for canonical in sample:
                candidate = self.state.pool[canonical]
                first_rationale = (
                    candidate.rationales[0]["text"] if candidate.rationales else ""
                )
                lines.append(f"- {canonical} (proposed by {candidate.proposer}: {first_rationale})")
            prompt = render(
                self._templates["critique_cross"],
                {
                    "task_block": self._task_block,
                    "round": self.state.round,
                    "peer_candidates_block": "\n".join(lines),
                },
            )
            entries, skipped = self._critique_entries(agent, "critique_cross", prompt)
            return {"agent": agent.scientist_id, "entries": entries, "skipped": skipped}

        return worker

    def critique_phase(self) -> None:
        if self.config.self_critique_enabled:
            candidates_exist = any(self._round_proposals.values())
            agents_with_proposals = [
                agent
                for agent in self.agents
                if self._round_proposals.get(agent.scientist_id)
            ]
            if candidates_exist:
                outcomes = self._fan_out(
                    self._self_critique_worker(), agents_with_proposals
                )
                for outcome in outcomes:
                    if outcome["skipped"]:
                        self.stats["skipped_critiques"] += 1
                        self._event(
                            "critique_self", outcome["agent"], {"skipped": True}
                        )
                        continue
                    payload = self._apply_self_critiques(
                        outcome["agent"], outcome["entries"]
                    )
                    self._event("critique_self", outcome["agent"], payload)
        samples = self._cross_samples()
        reviewers = [agent for agent in self.agents if samples[agent.scientist_id]]
        outcomes = self._fan_out(self._cross_critique_worker(samples), reviewers)
        for outcome in outcomes:
            agent_id = outcome["agent"]
            if outcome["skipped"]:
                self.stats["skipped_critiques"] += 1
                self._event("critique_cross", agent_id, {"skipped": True})
                continue
            applied = []
            for entry in outcome["entries"]:
                canonical = _canonical_or_none(entry.smiles)
                if canonical is None or canonical not in self.state.pool:
                    continue
                suggestion = None
                if entry.replacement is not None:
                    suggestion = _canonical_or_none(entry.replacement) or entry.replacement
                self.state.pool[canonical].critiques.append(
                    Critique(
                        critic=agent_id,
                        round=self.state.round,
                        text=entry.critique,
                        suggestion=suggestion,
                    )
                )
                applied.append(canonical)
            self._event(
                "critique_cross",
                agent_id,
                {"sampled": samples[agent_id], "critiqued": applied},
            )
        self._flush()

    # -- voting phase -------------------------------------------------------

    def _ballot_view(self) -> list[str]:
        pool_order = list(self.state.pool)
        if len(pool_order) <= self.config.ballot_cap:
            return pool_order
        ranked = aggregate_votes(self.state.pool)
        return ranked[: self.config.ballot_cap]

    def _voting_worker(self, ballot: list[str]):
        def worker(agent: _Agent) -> dict:
            lines = [f"- {canonical}" for canonical in ballot]
            prompt = render(
                self._templates["voting"],
                {
                    "task_block": self._task_block,
                    "round": self.state.round,
                    "ballot_block": "\n".join(lines),
                },
            )
            raw: dict[str, tuple[float, float, float]] | None = None
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                try:
                    raw = parse_ballot(self._complete(agent, "voting", prompt), ballot)
                except BallotParseError:
                    retry = (
                        "Your previous ballot could not be parsed. Reply again with "
                        "only a fenced JSON object keyed by candidate SMILES.\n\n"
                        + prompt
                    )
                    try:
                        raw = parse_ballot(
                            self._complete(agent, "voting_repair", retry), ballot
                        )
                    except BallotParseError:
                        raw = None
            return {"agent": agent.scientist_id, "ballot": raw}

        return worker

    def voting_phase(self) -> None:
        ballot = self._ballot_view()
        for candidate in self.state.pool.values():
            candidate.scores = {}
            candidate.votes = set()
        outcomes = self._fan_out(self._voting_worker(ballot), self.agents)
        t = self.config.votes_per_agent
        for outcome in outcomes:
            agent_id = outcome["agent"]
            if outcome["ballot"] is None:
                self.stats["ballot_abstentions"] += 1
                self._event("voting", agent_id, {"abstained": True})
                continue
            triples = {
                canonical: ScoreTriple.clamped(raw)
                for canonical, raw in outcome["ballot"].items()
            }
            for canonical, triple in triples.items():
                self.state.pool[canonical].scores[agent_id] = triple
            means = {c: triples[c].mean if c in triples else 0.0 for c in ballot}
            votes = sorted(ballot, key=lambda c: (-means[c], c))[: min(t, len(ballot))]
            for canonical in votes:
                self.state.pool[canonical].votes.add(agent_id)
            self._event(
                "voting",
                agent_id,
                {
                    "abstained": False,
                    "scores": {c: triples[c].to_dict() for c in sorted(triples)},
                    "votes": votes,
                },
            )
        self._flush()

    # -- round driver -------------------------------------------------------

    def _snapshot_metrics(self) -> dict:
        fps = [self._fingerprint(c) for c in self.state.pool]
        snapshot = {
            "round": self.state.round,
            "pool_size": len(fps),
            "int_div": int_div_fingerprints(fps) if len(fps) >= 2 else None,
            "num_circles": num_circles_fingerprints(
                fps, h=self.metric_config.circle_threshold
            )
            if fps
            else 0,
        }
        self.round_metrics.append(snapshot)
        if self.writer is not None:
            self.writer.append_metrics(snapshot)
        return snapshot

    def run(self) -> DebateResult:
        ranking: list[str] = []
        while True:
            self.state.round += 1
            self.proposal_phase()
            self.critique_phase()
            self.voting_phase()
            ranking = aggregate_votes(self.state.pool)
            self._last_ranking = ranking
            snapshot = self._snapshot_metrics()
            reason = should_terminate(self.state, self.config)
            self._event(
                "round_summary",
                None,
                {
                    "ranking_top10": ranking[:10],
                    "metrics": snapshot,
                    "terminated": reason,
                },
            )
            self._flush()
            if reason is not None:
                self.state.terminated = reason
                break
        return DebateResult(
            task_id=self.task.task_id,
            termination=self.state.terminated or "max_rounds",
            rounds_run=self.state.round,
            pool=list(self.state.pool.values()),
            ranking=ranking,
            transcript=self.transcript,
            round_metrics=self.round_metrics,
            stats=dict(self.stats),
        )


def run_debate(
    config: DebateConfig,
    task: TaskSpec,
    profiles: list[ExpertiseProfile],
    backend: Backend,
    oracle=None,
    writer: RunWriter | None = None,
    **kwargs,
) -> DebateResult:
    """Convenience wrapper: build an engine and run the campaign."""
    engine = DebateEngine(
        config, task, profiles, backend, oracle=oracle, writer=writer, **kwargs
    )
    return engine.run()
