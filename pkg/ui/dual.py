import logging

from logic import frames, persistence
from logic.errors import NotKGFrameError, SchemaError
from logic.verification.models import CheckRequest

logger = logging.getLogger(__name__)


def run_dual_command(args) -> int:
    """
    Add the canonical dual of a family as `<family>_dual`, together with a
    verify_dual check, and write the extended instance.

    Returns 1 when the family is not a c-K-g-frame for the operator.
    """
    instance = persistence.parse_instance(args.file)
    if args.family not in instance.families:
        raise SchemaError("--family", f"unknown family {args.family!r}")
    if args.operator not in instance.operators:
        raise SchemaError("--operator", f"unknown operator {args.operator!r}")

    dual_name = f"{args.family}_dual"
    check_name = f"{dual_name}_verify"
    if dual_name in instance.families:
        raise SchemaError("families", f"{dual_name!r} already exists")
    if any(c.name == check_name for c in instance.checks):
        raise SchemaError("checks", f"{check_name!r} already exists")

    try:
        dual, certificate = frames.canonical_dual(
            instance.families[args.family], instance.operators[args.operator]
        )
    except NotKGFrameError as exc:
        logger.error("no canonical dual: %s", exc)
        return 1

    logger.info("canonical dual %s: ||T||^2 = %.6g, duality residual %.3e",
                dual_name, certificate.synthesis_norm_sq, certificate.duality_residual)
    instance.families[dual_name] = dual
    instance.checks.append(CheckRequest(
        name=check_name,
        kind="verify_dual",
        params={"family": args.family, "dual": dual_name, "operator": args.operator},
    ))
    persistence.save_instance(instance, args.out)
    return 0
