"""
Admin configuration for hypertrees app.
"""
from django.contrib import admin
from .models import SpectrumRun


@admin.register(SpectrumRun)
class SpectrumRunAdmin(admin.ModelAdmin):
    list_display = ["id", "subcommand", "status", "exit_code", "created_at"]
    list_filter = ["subcommand", "status", "created_at"]
    search_fields = ["id"]
