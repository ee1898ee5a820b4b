from django.db import models


class SpectrumRun(models.Model):
    """Stores one run of a hypertree subcommand and its report."""

    STATUS_CHOICES = [
        ("pending", "Pending"),
        ("processing", "Processing"),
        ("completed", "Completed"),
        ("failed", "Failed"),
    ]

    SUBCOMMAND_CHOICES = [
        ("check", "Check"),
        ("charpoly", "Characteristic polynomial"),
        ("matching", "Matching polynomial"),
        ("nullity", "Nullity"),
        ("divides", "Divisibility"),
        ("topple", "Toppled digraph"),
        ("loosepath", "Loose path comparison"),
        ("verify", "Verification suite"),
    ]

    subcommand = models.CharField(max_length=20, choices=SUBCOMMAND_CHOICES)
    hypergraph = models.JSONField(null=True, blank=True, help_text="Input hypergraph in JSON form")
    options = models.JSONField(default=dict, help_text="Run options other than the hypergraph")
    report = models.JSONField(default=dict, help_text="Serialized report; big integers as strings")
    exit_code = models.IntegerField(null=True, blank=True)

    # Metadata
    status = models.CharField(max_length=20, choices=STATUS_CHOICES, default="pending")
    created_at = models.DateTimeField(auto_now_add=True)
    updated_at = models.DateTimeField(auto_now=True)

    class Meta:
        ordering = ["-created_at"]

    def __str__(self):
        return f"Run {self.id} - {self.subcommand} - {self.status}"
