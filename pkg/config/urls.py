"""
URL configuration for config project.

분석 실행 기록(AnalysisRun) 조회용 관리자 페이지만 노출합니다.
"""

from django.contrib import admin
from django.urls import path

urlpatterns = [
    path('admin/', admin.site.urls),
]
