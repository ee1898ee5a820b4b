"""
API views for hypertree runs.
"""
import logging

from rest_framework import status
from rest_framework.decorators import api_view
from rest_framework.response import Response
from rest_framework.views import APIView
from drf_spectacular.utils import extend_schema, OpenApiExample, OpenApiResponse
from drf_spectacular.types import OpenApiTypes

from .models import SpectrumRun
from .serializers import RunConfigSerializer, SpectrumRunSerializer
from .services.runner import EXIT_CAP, EXIT_PARSE, run

logger = logging.getLogger(__name__)

EXIT_STATUS = {
    0: status.HTTP_201_CREATED,
    EXIT_CAP: status.HTTP_422_UNPROCESSABLE_ENTITY,
    EXIT_PARSE: status.HTTP_400_BAD_REQUEST,
}


class RunView(APIView):
    """Run one subcommand on a posted hypergraph."""

    @extend_schema(
        request=RunConfigSerializer,
        responses={
            201: SpectrumRunSerializer,
            400: OpenApiResponse(
                response=OpenApiTypes.OBJECT,
                description="Validation or parse error",
                examples=[
                    OpenApiExample(
                        "Validation Error",
                        value={"keep": ["divides needs the vertices to keep."]},
                    )
                ],
            ),
            422: OpenApiResponse(
                response=OpenApiTypes.OBJECT,
                description="Run stored, but the input failed validation or a cap was exceeded",
                examples=[
                    OpenApiExample(
                        "Cap Exceeded",
                        value={
                            "runId": 3,
                            "subcommand": "topple",
                            "status": "failed",
                            "exitCode": 2,
                            "options": {"digraph_cap": 100},
                            "report": {"error": "toppled digraph configurations exceeds cap 100 (got 210)"},
                        },
                    )
                ],
            ),
            500: OpenApiResponse(
                response=OpenApiTypes.OBJECT,
                description="Server error",
                examples=[OpenApiExample("Server Error", value={"error": "degree identity failed"})],
            ),
        },
        examples=[
            OpenApiExample(
                "Characteristic Polynomial Request",
                value={
                    "subcommand": "charpoly",
                    "hypergraph": {"r": 3, "edges": [["1", "2", "3"]]},
                },
                request_only=True,
            ),
            OpenApiExample(
                "Characteristic Polynomial Response",
                value={
                    "runId": 1,
                    "subcommand": "charpoly",
                    "status": "completed",
                    "exitCode": 0,
                    "options": {"output_format": "json"},
                    "report": {
                        "factored": {
                            "factors": [
                                {"base": {"terms": [[1, "1"]]}, "exp": "3"},
                                {"base": {"terms": [[3, "1"], [0, "-1"]]}, "exp": "3"},
                            ]
                        },
                        "text": "l^3 * (l^3 - 1)^3",
                        "total_degree": "12",
                        "nullity": "3",
                        "lambda_exponent": "3",
                        "subgraphs": 4,
                    },
                },
                response_only=True,
            ),
        ],
    )
    def post(self, request):
        """
        POST /api/run

        Validate the options, run the subcommand and store the report.
        Reading files from the server is not allowed; the hypergraph
        travels in the request body.
        """
        serializer = RunConfigSerializer(data=request.data)
        if not serializer.is_valid():
            return Response(serializer.errors, status=status.HTTP_400_BAD_REQUEST)
        if serializer.validated_data.get("input_path"):
            return Response(
                {"input_path": ["Send the hypergraph in the request body instead."]},
                status=status.HTTP_400_BAD_REQUEST,
            )

        config = serializer.save()
        options = {
            key: value
            for key, value in serializer.data.items()
            if key not in ("subcommand", "hypergraph", "input_path") and value is not None
        }
        spectrum_run = SpectrumRun.objects.create(
            subcommand=config.subcommand,
            hypergraph=config.hypergraph,
            options=options,
            status="processing",
        )

        try:
            result = run(config)
        except Exception as e:
            logger.exception("run %s failed", spectrum_run.id)
            spectrum_run.status = "failed"
            spectrum_run.report = {"error": str(e)}
            spectrum_run.save()
            return Response({"error": str(e)}, status=status.HTTP_500_INTERNAL_SERVER_ERROR)

        spectrum_run.exit_code = result.exit_code
        spectrum_run.report = result.report
        spectrum_run.status = "completed" if result.exit_code == 0 else "failed"
        spectrum_run.save()

        response_status = EXIT_STATUS.get(result.exit_code, status.HTTP_422_UNPROCESSABLE_ENTITY)
        return Response(SpectrumRunSerializer(spectrum_run).data, status=response_status)


class RunDetailView(APIView):
    """Get a stored run."""

    @extend_schema(
        responses={
            200: SpectrumRunSerializer,
            404: OpenApiResponse(
                response=OpenApiTypes.OBJECT,
                description="Run not found",
                examples=[OpenApiExample("Not Found", value={"error": "Run not found"})],
            ),
        },
    )
    def get(self, request, run_id):
        """
        GET /api/run/{id}
        """
        try:
            spectrum_run = SpectrumRun.objects.get(id=run_id)
        except SpectrumRun.DoesNotExist:
            return Response({"error": "Run not found"}, status=status.HTTP_404_NOT_FOUND)
        return Response(SpectrumRunSerializer(spectrum_run).data)


@extend_schema(
    operation_id="health_check",
    summary="Health Check",
    description="Basic health check endpoint",
    responses={
        200: OpenApiResponse(
            response=OpenApiTypes.OBJECT,
            description="Service health status",
            examples=[
                OpenApiExample(
                    "Healthy",
                    value={"status": "healthy", "service": "Hypertree Spectra Backend"},
                )
            ],
        ),
    },
)
@api_view(["GET"])
def health_check(request):
    """
    GET /api/healthcheck

    Basic health check endpoint.
    """
    return Response({"status": "healthy", "service": "Hypertree Spectra Backend"})
