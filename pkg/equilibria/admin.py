from django.contrib import admin
from .models import AnalysisRun


@admin.register(AnalysisRun)
class AnalysisRunAdmin(admin.ModelAdmin):
    list_display = ('id', 'verb', 'game_name', 'status', 'stage_text', 'exit_code', 'progress_at', 'created_at')
    list_filter = ('verb', 'status')
    search_fields = ('game_name', 'error_message')
    readonly_fields = ('progress', 'progress_at', 'created_at', 'updated_at')
