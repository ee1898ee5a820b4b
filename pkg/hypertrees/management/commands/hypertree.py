"""
python manage.py hypertree <subcommand> [options]

Subcommands: check, charpoly, matching, nullity, divides, topple,
loosepath, verify. The report goes to standard output; a nonzero exit
status (1 validation, 2 cap exceeded, 3 parse error) is raised as a
CommandError after the report is written.
"""
from django.core.management.base import BaseCommand, CommandError

from hypertrees.serializers import RunConfigSerializer
from hypertrees.services.runner import run


def _labels(value: str):
    return [label.strip() for label in value.split(",") if label.strip()]


class Command(BaseCommand):
    help = "Characteristic polynomials, matchings and chip-firing checks for uniform hypertrees"

    def add_arguments(self, parser):
        subparsers = parser.add_subparsers(dest="subcommand", required=True)

        def with_input(name, help_text):
            sub = subparsers.add_parser(name, help=help_text)
            sub.add_argument("input_path", help="Hypergraph file (text 'r n m' format or JSON)")
            sub.add_argument("--root", default=None, help="Label of the root vertex (default: first vertex)")
            sub.add_argument("--subgraph-cap", type=int, default=None, help="Connected-subgraph enumeration cap")
            sub.add_argument("--workers", type=int, default=None, help="Threads for the per-subgraph map")
            output(sub)
            return sub

        def output(sub):
            sub.add_argument("--format", dest="output_format", choices=["json", "text"], default="json")

        with_input("check", "Validate uniformity, linearity, connectivity and acyclicity")

        charpoly = with_input("charpoly", "Factored characteristic polynomial")
        charpoly.add_argument("--breakdown", action="store_true", help="Add the per-subgraph rows")
        charpoly.add_argument("--expand", action="store_true", help="Add the multiplied-out polynomial")
        charpoly.add_argument("--expand-guard", type=int, default=None, help="Largest degree to expand")

        with_input("matching", "Matching counts and matching polynomial")
        with_input("nullity", "Multiplicity of the eigenvalue 0")

        divides = with_input("divides", "Divisibility by the polynomials of an induced subgraph")
        divides.add_argument("--keep", type=_labels, required=True, help="Comma-separated labels to keep")

        topple = with_input("topple", "Toppled digraph census")
        topple.add_argument(
            "--ordering",
            default="good",
            help="'good' or comma-separated labels from the largest variable down",
        )
        topple.add_argument("--digraph-cap", type=int, default=None, help="Toppled digraph size cap")
        topple.add_argument("--cycle-cap", type=int, default=None, help="Cycles enumerated before the census is marked partial")
        topple.add_argument("--length-cap", type=int, default=None, help="Longest cycle searched (default r*m)")

        loosepath = subparsers.add_parser("loosepath", help="Loose path against its closed form")
        loosepath.add_argument("-m", type=int, required=True, help="Number of edges")
        loosepath.add_argument("-r", type=int, required=True, help="Uniformity")
        output(loosepath)

        verify = subparsers.add_parser("verify", help="Product formula versus oracle checks")
        verify.add_argument("--suite", choices=["small", "full"], default="small")
        verify.add_argument("--seed", type=int, default=0, help="Seed for the randomized checks")
        output(verify)

    def handle(self, *args, **options):
        fields = RunConfigSerializer().fields
        data = {key: value for key, value in options.items() if key in fields and value is not None}
        serializer = RunConfigSerializer(data=data)
        if not serializer.is_valid():
            raise CommandError(f"Invalid options: {serializer.errors}", returncode=1)

        result = run(serializer.save())
        self.stdout.write(result.output, ending="")
        if result.exit_code:
            raise CommandError(
                f"{options['subcommand']} exited with status {result.exit_code}",
                returncode=result.exit_code,
            )
