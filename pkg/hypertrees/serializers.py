"""
Serializers for hypertree runs and reports.

Polynomials travel as {"terms": [[degree, "coefficient"], ...]} and
factored polynomials as {"factors": [{"base": ..., "exp": "..."}]};
every exponent and coefficient is a decimal string.
"""
from fractions import Fraction

from drf_spectacular.types import OpenApiTypes
from drf_spectacular.utils import extend_schema_field, extend_schema_serializer
from rest_framework import serializers

from .models import SpectrumRun
from .services.exceptions import PolynomialError
from .services.poly import FactoredPoly, IntPoly, expand


@extend_schema_field(OpenApiTypes.STR)
class BigIntegerField(serializers.Field):
    """Integer of any size, as a decimal string."""

    def to_representation(self, value):
        return str(value)

    def to_internal_value(self, data):
        try:
            return int(str(data))
        except ValueError:
            raise serializers.ValidationError("Expected an integer.") from None


@extend_schema_field(OpenApiTypes.STR)
class FractionField(serializers.Field):
    def to_representation(self, value):
        return str(Fraction(value))

    def to_internal_value(self, data):
        try:
            return Fraction(str(data))
        except ValueError:
            raise serializers.ValidationError("Expected a fraction such as '43/3'.") from None


@extend_schema_field(OpenApiTypes.OBJECT)
class IntPolyField(serializers.Field):
    def to_representation(self, value):
        return value.to_json()

    def to_internal_value(self, data):
        try:
            return IntPoly.from_json(data)
        except PolynomialError as exc:
            raise serializers.ValidationError(str(exc)) from None


@extend_schema_field(OpenApiTypes.OBJECT)
class FactoredPolyField(serializers.Field):
    def to_representation(self, value):
        return value.to_json()

    def to_internal_value(self, data):
        try:
            return FactoredPoly.from_json(data)
        except PolynomialError as exc:
            raise serializers.ValidationError(str(exc)) from None


class OrderingField(serializers.Field):
    """Either "good" or the vertex labels from the largest variable down (list or comma string)."""

    def to_representation(self, value):
        return value if value == "good" else list(value)

    def to_internal_value(self, data):
        if data == "good":
            return data
        if isinstance(data, str):
            data = [label.strip() for label in data.split(",") if label.strip()]
        if not isinstance(data, (list, tuple)) or not data:
            raise serializers.ValidationError('Expected "good" or a list of vertex labels.')
        labels = tuple(str(label) for label in data)
        if len(set(labels)) != len(labels):
            raise serializers.ValidationError("An ordering lists every vertex label once.")
        return labels


class FindingSerializer(serializers.Serializer):
    code = serializers.CharField()
    passed = serializers.BooleanField()
    detail = serializers.CharField()


class SubgraphFactorSerializer(serializers.Serializer):
    """One row of the per-subgraph breakdown."""

    vertices = serializers.SerializerMethodField()
    edges = serializers.SerializerMethodField()
    boundary = serializers.IntegerField(source="handle.boundary_size")
    a_H = BigIntegerField(source="exponent")
    phi = IntPolyField(source="base")
    phi_text = serializers.SerializerMethodField()
    nu = serializers.IntegerField()

    def get_vertices(self, obj):
        labels = self.context["hypergraph"].labels
        return [labels[v] for v in obj.handle.vertex_set]

    def get_edges(self, obj):
        return list(obj.handle.edge_set)

    def get_phi_text(self, obj):
        return str(obj.base)


class CharPolyReportSerializer(serializers.Serializer):
    """
    Factored characteristic polynomial with its degree and nullity.

    Context: ``breakdown`` adds the per-subgraph rows (needs ``hypergraph``),
    ``expand`` adds the multiplied-out polynomial under ``expand_guard``.
    """

    factored = FactoredPolyField()
    text = serializers.SerializerMethodField()
    total_degree = BigIntegerField()
    nullity = BigIntegerField()
    lambda_exponent = BigIntegerField(source="factored.lambda_exponent")
    subgraphs = serializers.SerializerMethodField()

    def get_text(self, obj):
        return str(obj.factored)

    def get_subgraphs(self, obj):
        return len(obj.per_subgraph)

    def to_representation(self, instance):
        data = super().to_representation(instance)
        if self.context.get("expand"):
            data["expanded"] = expand(instance.factored, self.context.get("expand_guard")).to_json()
        if self.context.get("breakdown"):
            data["breakdown"] = SubgraphFactorSerializer(
                instance.per_subgraph, many=True, context=self.context
            ).data
        return data


class MatchingProfileSerializer(serializers.Serializer):
    counts = serializers.ListField(child=BigIntegerField())
    nu = serializers.IntegerField()
    order = serializers.IntegerField()
    polynomial = serializers.SerializerMethodField()
    text = serializers.SerializerMethodField()

    def get_polynomial(self, obj):
        return obj.polynomial(self.context["r"]).to_json()

    def get_text(self, obj):
        return str(obj.polynomial(self.context["r"]))


class ExponentRowSerializer(serializers.Serializer):
    vertices = serializers.SerializerMethodField()
    in_subgraph = BigIntegerField()
    in_tree = BigIntegerField()

    def get_vertices(self, obj):
        labels = self.context["hypergraph"].labels
        return [labels[v] for v in obj.vertex_set]


class DivisibilityVerdictSerializer(serializers.Serializer):
    """
    Divisibility verdict for an induced subgraph.

    Context: ``hypergraph`` labels the exponent rows, present only when
    the subgraph is connected.
    """

    matching_divides = serializers.BooleanField()
    charpoly_divides = serializers.BooleanField()
    corollary_predicts = serializers.BooleanField()
    connected = serializers.BooleanField()
    components = serializers.IntegerField()
    subgraph_charpoly = FactoredPolyField()
    subgraph_text = serializers.SerializerMethodField()
    common_factor_text = serializers.SerializerMethodField()
    exponents_dominated = serializers.BooleanField(allow_null=True)

    def get_subgraph_text(self, obj):
        return str(obj.subgraph_charpoly)

    def get_common_factor_text(self, obj):
        return str(obj.common_factor)

    def to_representation(self, instance):
        data = super().to_representation(instance)
        if instance.connected:
            data["exponent_rows"] = ExponentRowSerializer(
                instance.exponent_rows, many=True, context=self.context
            ).data
        return data


class LoosePathRowSerializer(serializers.Serializer):
    j = serializers.IntegerField()
    main_exponent = BigIntegerField()
    closed_form = FractionField()
    agree = serializers.BooleanField()


class LoosePathComparisonSerializer(serializers.Serializer):
    m = serializers.IntegerField()
    r = serializers.IntegerField()
    agree = serializers.BooleanField()
    rows = LoosePathRowSerializer(many=True)
    a0 = FractionField()
    lambda_main = FractionField()
    lambda_closed = FractionField()
    factored = FactoredPolyField()
    text = serializers.SerializerMethodField()

    def get_text(self, obj):
        return str(obj.factored)


class ToppleSummarySerializer(serializers.Serializer):
    config_count = serializers.IntegerField()
    scc_histogram = serializers.DictField(child=serializers.IntegerField())
    cycle_length_census = serializers.DictField(source="census.lengths", child=serializers.IntegerField())
    cycles_per_scc = serializers.SerializerMethodField()
    partial = serializers.BooleanField(source="census.partial")
    hop_cycles = serializers.IntegerField(source="census.hop_cycles")
    critical_count = serializers.IntegerField(allow_null=True)
    checks = serializers.SerializerMethodField()

    def get_cycles_per_scc(self, obj):
        return [scc.cycles for scc in obj.census.per_scc]

    def get_checks(self, obj):
        return {
            "single_edge_cycles_only": obj.single_edge_cycles_only,
            "cycle_lengths_divisible": obj.cycle_lengths_divisible,
            "critical_components_match": obj.critical_components_match,
        }


class CheckResultSerializer(serializers.Serializer):
    name = serializers.CharField()
    passed = serializers.BooleanField()
    detail = serializers.DictField()


class SuiteReportSerializer(serializers.Serializer):
    suite = serializers.CharField()
    seed = serializers.IntegerField()
    passed = serializers.BooleanField()
    checks = CheckResultSerializer(many=True)


@extend_schema_serializer(
    examples=[
        {
            "subcommand": "charpoly",
            "hypergraph": {"r": 3, "edges": [["1", "2", "3"], ["3", "4", "5"]]},
            "breakdown": True,
        }
    ]
)
class RunConfigSerializer(serializers.Serializer):
    """Validated options for one run; ``save()`` returns a RunConfig."""

    subcommand = serializers.ChoiceField(choices=[])
    input_path = serializers.CharField(required=False, allow_null=True, default=None)
    hypergraph = serializers.JSONField(required=False, allow_null=True, default=None)
    root = serializers.CharField(required=False, allow_null=True, default=None)
    ordering = OrderingField(required=False, default="good")
    keep = serializers.ListField(child=serializers.CharField(), required=False, default=list)
    m = serializers.IntegerField(required=False, allow_null=True, default=None, min_value=1)
    r = serializers.IntegerField(required=False, allow_null=True, default=None, min_value=3)
    suite = serializers.ChoiceField(choices=["small", "full"], default="small")
    seed = serializers.IntegerField(default=0)
    subgraph_cap = serializers.IntegerField(required=False, allow_null=True, default=None, min_value=1)
    digraph_cap = serializers.IntegerField(required=False, allow_null=True, default=None, min_value=1)
    cycle_cap = serializers.IntegerField(required=False, allow_null=True, default=None, min_value=1)
    length_cap = serializers.IntegerField(required=False, allow_null=True, default=None, min_value=1)
    expand_guard = serializers.IntegerField(required=False, allow_null=True, default=None, min_value=1)
    workers = serializers.IntegerField(required=False, allow_null=True, default=None, min_value=1)
    output_format = serializers.ChoiceField(choices=["json", "text"], default="json")
    breakdown = serializers.BooleanField(default=False)
    expand = serializers.BooleanField(default=False)

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        from .services.runner import HANDLERS

        self.fields["subcommand"].choices = list(HANDLERS)

    def validate(self, attrs):
        from .services.runner import NEEDS_INPUT

        subcommand = attrs["subcommand"]
        if subcommand in NEEDS_INPUT and attrs["hypergraph"] is None and not attrs["input_path"]:
            raise serializers.ValidationError({"hypergraph": [f"{subcommand} needs a hypergraph."]})
        if subcommand == "divides" and not attrs["keep"]:
            raise serializers.ValidationError({"keep": ["divides needs the vertices to keep."]})
        if subcommand == "loosepath":
            missing = {name: ["This field is required."] for name in ("m", "r") if attrs[name] is None}
            if missing:
                raise serializers.ValidationError(missing)
        return attrs

    def create(self, validated_data):
        from .services.runner import RunConfig

        validated_data["keep"] = tuple(validated_data["keep"])
        return RunConfig(**validated_data)


class SpectrumRunSerializer(serializers.ModelSerializer):
    class Meta:
        model = SpectrumRun
        fields = ["id", "subcommand", "status", "exit_code", "options", "report", "created_at", "updated_at"]

    def to_representation(self, instance):
        """Convert to API response format."""
        return {
            "runId": instance.id,
            "subcommand": instance.subcommand,
            "status": instance.status,
            "exitCode": instance.exit_code,
            "options": instance.options,
            "report": instance.report,
        }
