from argparse import Namespace

from ..loggers import Report
from .manifest import Diagnostic, ManifestError, validate_manifest


def run_validate(args: Namespace) -> Report:
    """
    Schema, reference, dimension and expression validation of the manifest
    without computation. The diagnostics are embedded in the report.
    """
    if args.manifest is None:
        raise ManifestError([Diagnostic("", "Expected --manifest for `validate`")])

    diagnostics = validate_manifest(args.manifest)
    report = Report("validate",
                    manifest=str(args.manifest),
                    diagnostics=[d.to_dict() for d in diagnostics])
    report.add_check("manifest",
                     float(len(diagnostics)),
                     1.0,
                     passed=not diagnostics)
    return report
