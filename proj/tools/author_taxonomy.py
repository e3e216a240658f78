#!/usr/bin/env python3
"""Writes data/taxonomy.json, the 98 false-positive scenarios the generator realises.

Each scenario fixes the signal pattern (continuous ranges), the contextual flags
(categorical parameters and EHR context) and the class it is stratified under. Ranges
are kept clear of every rule threshold so a scenario's routing and claims do not depend
on the sampled values.

Usage: tools/author_taxonomy.py [output]
"""
import json
import sys
from pathlib import Path

NORMAL_SPO2 = dict(mu=97.0, sigma=1.0, lower=95.5, upper=99.5)
LOW_SPO2 = dict(mu=91.0, sigma=1.0, lower=89.0, upper=93.0)
NORMAL_HR = dict(mu=76.0, sigma=6.0, lower=62.0, upper=92.0)
LOW_HR = dict(mu=45.5, sigma=1.5, lower=42.0, upper=48.5)
ISOLATED_HIGH_HR = dict(mu=128.0, sigma=4.0, lower=120.0, upper=136.0)
ANY_POSITION = {"uniform": ["upright", "lateral", "prone"]}

entries = []


def ctx(copd=False, baseline_spo2=None, baseline_hr=None, medication=False):
    return {
        "copd_documented": copd,
        "baseline_spo2": baseline_spo2,
        "baseline_hr": baseline_hr,
        "rate_limiting_medication": medication,
    }


def add(prefix, cls, spo2, hr, note, context=None, nocturnal=False, **categorical):
    cat = {"accel_level": {"fixed": "still"}, "device_status": {"fixed": "ok"},
           "probe_cover_present": {"fixed": "false"}, "position": ANY_POSITION,
           "self_reported_activity": {"fixed": "none"}}
    for key, value in categorical.items():
        cat[key] = value if isinstance(value, dict) else {"fixed": value}
    n = sum(1 for e in entries if e["case_id"].startswith(prefix + "-")) + 1
    entries.append({
        "case_id": f"{prefix}-{n:02d}",
        "domain_class": cls,
        "epoch_count": 0,
        "continuous_params": {"spo2": spo2, "hr": hr},
        "categorical_params": cat,
        "context": context or ctx(),
        "nocturnal": nocturnal,
        "expected_outcome_note": note,
    })


def rng(mu, sigma, lower, upper):
    return dict(mu=mu, sigma=sigma, lower=lower, upper=upper)


# --- probe integrity: artefact flag explains a low reading --------------------------
for _ in range(8):
    add("PI", "probe_integrity", LOW_SPO2, NORMAL_HR, "motion artefact flag on a low SpO2 reading",
        device_status="motion_artefact", self_reported_activity={"uniform": ["none", "resting"]})
for _ in range(6):
    add("PI", "probe_integrity", LOW_SPO2, NORMAL_HR, "probe cover flagged during a low SpO2 reading",
        device_status="probe_cover", probe_cover_present="true")
for _ in range(4):
    add("PI", "probe_integrity", LOW_SPO2, NORMAL_HR, "intermittent artefact or probe cover flag",
        device_status={"uniform": ["motion_artefact", "probe_cover"]})
for _ in range(3):
    add("PI", "probe_integrity", NORMAL_SPO2, NORMAL_HR, "signal quality alert with normal values",
        device_status="motion_artefact", ambient_condition="indoor")
for _ in range(2):
    add("PI", "probe_integrity", rng(83.0, 1.5, 80.0, 86.0), NORMAL_HR,
        "displaced probe reading implausibly low", device_status="probe_cover",
        probe_cover_present="true")

# --- activity integrity: motion explains the reading ---------------------------------
for accel, report in [("light", "walking"), ("light", "none"), ("vigorous", "exercising"),
                      ("vigorous", "none"), ("light", "walking"), ("vigorous", "exercising"),
                      ({"uniform": ["light", "vigorous"]}, "walking"),
                      ({"uniform": ["light", "vigorous"]}, "exercising")]:
    add("AI", "activity_integrity", LOW_SPO2, rng(84.0, 4.0, 78.0, 95.0),
        "desaturation reading during movement", accel_level=accel, self_reported_activity=report)

# --- COPD: chronic low saturation at the patient's baseline -------------------------
for baseline in [88.0, 89.0, 90.0, 91.0, 92.0, 87.0, 88.0, 89.0, 90.0, 91.0, 92.0, 87.0, 90.0]:
    floor = max(86.0, baseline - 2.0)
    add("COPD", "copd", rng(baseline - 0.5, 1.0, floor + 0.3, min(baseline + 1.5, 93.5)), NORMAL_HR,
        "COPD patient at documented baseline", context=ctx(copd=True, baseline_spo2=baseline))

# --- bradycardia: rate-limiting medication ------------------------------------------
for _ in range(2):
    add("BRADY", "bradycardia", NORMAL_SPO2, LOW_HR, "beta-blocker bradycardia",
        context=ctx(medication=True))

# --- nocturnal: positional dip while asleep ----------------------------------------
add("NOCT", "nocturnal", rng(93.5, 0.3, 93.2, 93.9), rng(62.0, 3.0, 55.0, 70.0),
    "supine nocturnal dip against default baseline", nocturnal=True, position="supine")
add("NOCT", "nocturnal", rng(93.5, 0.3, 93.2, 93.9), rng(62.0, 3.0, 55.0, 70.0),
    "supine nocturnal dip against default baseline", nocturnal=True, position="supine")
add("NOCT", "nocturnal", rng(92.8, 0.4, 92.3, 93.8), rng(60.0, 3.0, 54.0, 68.0),
    "supine nocturnal dip against documented baseline", nocturnal=True, position="supine",
    context=ctx(baseline_spo2=95.0))

# --- tachycardia: high HR within personal allowance --------------------------------
for baseline in [92.0, 95.0, 88.0, 90.0, 96.0, 93.0, 91.0]:
    lower, upper = max(100.8, baseline + 8.0), baseline + 18.0
    add("TACHY", "tachycardia", NORMAL_SPO2, rng((lower + upper) / 2, 2.0, lower, upper),
        "high HR within personal baseline allowance", context=ctx(baseline_hr=baseline))
add("TACHY", "tachycardia", rng(96.0, 0.5, 95.0, 97.0), ISOLATED_HIGH_HR,
    "isolated high HR without corroborating context (expected false escalation)")

# --- meta conflict: several specialists, one verdict ------------------------------
COPD_ABOVE_FLOOR = rng(89.5, 0.8, 88.5, 91.5)          # baseline 90, floor 88
COPD_BELOW_FLOOR = rng(88.0, 0.6, 87.0, 89.2)          # baseline 92, floor 90
for _ in range(3):
    add("META", "meta_conflict", LOW_SPO2, NORMAL_HR,
        "system flag with low SpO2 and no corroborating context (expected false escalation)",
        device_status="system_flag")
for _ in range(2):
    add("META", "meta_conflict", COPD_BELOW_FLOOR, NORMAL_HR,
        "system flag with COPD reading below personal floor (expected false escalation)",
        device_status="system_flag", context=ctx(copd=True, baseline_spo2=92.0))
for _ in range(2):
    add("META", "meta_conflict", NORMAL_SPO2, ISOLATED_HIGH_HR,
        "system flag with isolated high HR (expected false escalation)", device_status="system_flag")
add("META", "meta_conflict", rng(93.5, 0.2, 93.1, 93.9), rng(101.8, 0.4, 100.6, 103.0),
    "threshold-marginal SpO2 and HR (expected false escalation)", device_status="threshold_marginal")
add("META", "meta_conflict", COPD_ABOVE_FLOOR, rng(116.0, 2.0, 112.0, 120.0),
    "duplicate alert stream, COPD and tachycardia claims disagree (expected false escalation)",
    device_status="duplicate_alert", context=ctx(copd=True, baseline_spo2=90.0))
for _ in range(4):
    add("META", "meta_conflict", COPD_ABOVE_FLOOR, NORMAL_HR,
        "system flag resolved by COPD baseline", device_status="system_flag",
        context=ctx(copd=True, baseline_spo2=90.0))
for _ in range(3):
    add("META", "meta_conflict", NORMAL_SPO2, LOW_HR, "system flag resolved by medication history",
        device_status="system_flag", context=ctx(medication=True))
for _ in range(2):
    add("META", "meta_conflict", NORMAL_SPO2, rng(106.0, 2.0, 102.0, 110.0),
        "system flag resolved by HR baseline", device_status="system_flag",
        context=ctx(baseline_hr=94.0))
for _ in range(3):
    add("META", "meta_conflict", COPD_ABOVE_FLOOR, rng(106.0, 2.0, 102.0, 110.0),
        "COPD and tachycardia claims agree", context=ctx(copd=True, baseline_spo2=90.0, baseline_hr=95.0))
for _ in range(3):
    add("META", "meta_conflict", NORMAL_SPO2, LOW_HR, "sleep bradycardia, nocturnal and bradycardia agree",
        nocturnal=True, position="supine")
for _ in range(2):
    add("META", "meta_conflict", COPD_ABOVE_FLOOR, rng(64.0, 3.0, 56.0, 72.0),
        "nocturnal COPD dip, COPD and nocturnal agree", nocturnal=True, position="supine",
        context=ctx(copd=True, baseline_spo2=90.0))
for _ in range(2):
    add("META", "meta_conflict", NORMAL_SPO2, rng(118.0, 4.0, 108.0, 128.0),
        "exertional tachycardia, activity and tachycardia agree", accel_level="light",
        self_reported_activity="walking")
for _ in range(2):
    add("META", "meta_conflict", COPD_ABOVE_FLOOR, rng(88.0, 3.0, 80.0, 95.0),
        "exertional COPD desaturation, activity and COPD agree", accel_level="vigorous",
        self_reported_activity="exercising", context=ctx(copd=True, baseline_spo2=90.0))

# --- probe integrity + activity ------------------------------------------------------
for status, accel, report in [("motion_artefact", "light", "walking"),
                              ("motion_artefact", "vigorous", "exercising"),
                              ("motion_artefact", "vigorous", "none"),
                              ("probe_cover", "light", "walking"),
                              ("probe_cover", "vigorous", "none")]:
    add("PACT", "probe_activity_conflict", LOW_SPO2, rng(84.0, 4.0, 78.0, 95.0),
        "artefact during movement, probe and activity agree", device_status=status, accel_level=accel,
        self_reported_activity=report, probe_cover_present="true" if status == "probe_cover" else "false")
for status in ["motion_artefact", "motion_artefact", "probe_cover"]:
    add("PACT", "probe_activity_conflict", LOW_SPO2, rng(37.5, 1.0, 35.0, 39.5),
        "artefact flag while reported walking but accelerometer still; activity context "
        "insufficient (expected false escalation)", device_status=status, self_reported_activity="walking",
        probe_cover_present="true" if status == "probe_cover" else "false")

# --- probe integrity + condition -----------------------------------------------------
for _ in range(3):
    add("PCOND", "probe_condition_conflict", rng(88.8, 0.4, 88.0, 89.5), NORMAL_HR,
        "probe cover reported without status flag, COPD reading below personal floor "
        "(expected false escalation)", probe_cover_present="true",
        context=ctx(copd=True, baseline_spo2=92.0))

# --- epoch counts: 530 over 98 cases -------------------------------------------------
pattern = [5, 6, 4, 7, 5, 6, 5, 3, 8, 5, 6, 4]
for i, e in enumerate(entries):
    e["epoch_count"] = pattern[i % len(pattern)]
total = sum(e["epoch_count"] for e in entries)
i = 0
while total != 530:
    step = 1 if total < 530 else -1
    e = entries[i % len(entries)]
    if 3 <= e["epoch_count"] + step <= 8:
        e["epoch_count"] += step
        total += step
    i += 7

assert len(entries) == 98, len(entries)
out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data" / "taxonomy.json"
out.write_text(json.dumps(entries, indent=2) + "\n")
print(f"{len(entries)} entries, {total} epochs -> {out}")
