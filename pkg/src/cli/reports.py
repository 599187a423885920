"""
Condition matrix rows and their rendering
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from src.models.errors import SwClassError
from src.models.function_table import FunctionTable, load_function
from src.models.results import Answer, FunctionReport, Verdict
from src.classify.certification import SearchBudget, classify_iid
from src.classify.necessary import hk_check, necessary_condition, sufficient_prop5, sufficient_prop6
from src.classify.pseudo_identity import classify_smooth

logger = logging.getLogger(__name__)

MATRIX_COLUMNS = ["function", "alphabets", "HK", "Prop4", "Prop5", "Prop6", "Cert", "PI", "iid", "smooth", "error"]


def build_function_report(f: FunctionTable, budget: Optional[SearchBudget] = None) -> Dict[str, Any]:
    """
    Evaluate every condition and both verdicts for one function

    Returns:
        Dictionary with the matrix row ("report") and the two verdicts
    """
    iid = classify_iid(f, budget)
    smooth = classify_smooth(f)
    report = FunctionReport(
        name=f.name or "function",
        alphabets=list(f.alphabet_sizes),
        hk=hk_check(f).holds if f.num_terminals == 2 else None,
        prop4=necessary_condition(f).holds,
        prop5=sufficient_prop5(f),
        prop6=sufficient_prop6(f),
        certified_depth=iid.certificate.depth if iid.certificate is not None else None,
        pseudo_identity=smooth.answer == Answer.IN_SW_CLASS,
        iid=iid.answer,
        smooth=smooth.answer,
    )
    return {"report": report, "iid": iid, "smooth": smooth}


def verdict_document(verdict: Verdict) -> Dict[str, Any]:
    return verdict.model_dump(mode="json", exclude_none=True)


def conditions_document(report: FunctionReport) -> Dict[str, Any]:
    return report.model_dump(mode="json", exclude={"name", "alphabets", "error"})


def _report_file(path: Path, budget: Optional[SearchBudget]) -> FunctionReport:
    try:
        f = load_function(path)
        return build_function_report(f, budget)["report"]
    except SwClassError as e:
        logger.warning("skipping %s: %s", path.name, e)
        return FunctionReport(name=path.stem, error=str(e))


def report_directory(directory: Path, budget: Optional[SearchBudget] = None, jobs: int = 1) -> List[FunctionReport]:
    """
    One row per *.json file in filename order; unreadable files become error rows
    """
    paths = sorted(Path(directory).glob("*.json"))
    if jobs <= 1:
        return [_report_file(p, budget) for p in paths]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda p: _report_file(p, budget), paths))


def _mark(value: Optional[bool]) -> str:
    if value is None:
        return "-"
    return "✓" if value else "✗"


def report_frame(reports: Sequence[FunctionReport]) -> pd.DataFrame:
    """Condition matrix as a DataFrame of display strings"""
    rows = []
    for r in reports:
        rows.append({
            "function": r.name,
            "alphabets": "x".join(str(s) for s in r.alphabets) if r.alphabets else "-",
            "HK": _mark(r.hk),
            "Prop4": _mark(r.prop4),
            "Prop5": _mark(r.prop5),
            "Prop6": _mark(r.prop6),
            "Cert": str(r.certified_depth) if r.certified_depth is not None else "-",
            "PI": _mark(r.pseudo_identity),
            "iid": r.iid.value if r.iid is not None else "-",
            "smooth": r.smooth.value if r.smooth is not None else "-",
            "error": r.error or "",
        })
    return pd.DataFrame(rows, columns=MATRIX_COLUMNS)


def render_matrix(reports: Sequence[FunctionReport]) -> str:
    if not reports:
        return "no function files"
    return report_frame(reports).to_string(index=False)
