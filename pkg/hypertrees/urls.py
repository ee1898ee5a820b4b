"""
URL configuration for hypertrees app.
"""
from django.urls import path
from . import views

app_name = "hypertrees"

urlpatterns = [
    path("run", views.RunView.as_view(), name="run"),
    path("run/<int:run_id>", views.RunDetailView.as_view(), name="run-detail"),
    path("healthcheck", views.health_check, name="health-check"),
]
