# Generated by Django 6.0 on 2026-10-19 10:12

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="SpectrumRun",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                (
                    "subcommand",
                    models.CharField(
                        choices=[
                            ("check", "Check"),
                            ("charpoly", "Characteristic polynomial"),
                            ("matching", "Matching polynomial"),
                            ("nullity", "Nullity"),
                            ("divides", "Divisibility"),
                            ("topple", "Toppled digraph"),
                            ("loosepath", "Loose path comparison"),
                            ("verify", "Verification suite"),
                        ],
                        max_length=20,
                    ),
                ),
                (
                    "hypergraph",
                    models.JSONField(
                        blank=True,
                        help_text="Input hypergraph in JSON form",
                        null=True,
                    ),
                ),
                (
                    "options",
                    models.JSONField(
                        default=dict,
                        help_text="Run options other than the hypergraph",
                    ),
                ),
                (
                    "report",
                    models.JSONField(
                        default=dict,
                        help_text="Serialized report; big integers as strings",
                    ),
                ),
                ("exit_code", models.IntegerField(blank=True, null=True)),
                (
                    "status",
                    models.CharField(
                        choices=[
                            ("pending", "Pending"),
                            ("processing", "Processing"),
                            ("completed", "Completed"),
                            ("failed", "Failed"),
                        ],
                        default="pending",
                        max_length=20,
                    ),
                ),
                ("created_at", models.DateTimeField(auto_now_add=True)),
                ("updated_at", models.DateTimeField(auto_now=True)),
            ],
            options={
                "ordering": ["-created_at"],
            },
        ),
    ]
