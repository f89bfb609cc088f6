# Generated by Django 5.2.7 on 2026-10-17 09:12

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="AnalysisRun",
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
                ("verb", models.CharField(max_length=32, verbose_name="분석 명령")),
                (
                    "game_name",
                    models.CharField(
                        blank=True, default="", max_length=255, verbose_name="게임 이름"
                    ),
                ),
                (
                    "config",
                    models.JSONField(blank=True, default=dict, verbose_name="실행 설정"),
                ),
                (
                    "report",
                    models.JSONField(blank=True, null=True, verbose_name="보고서"),
                ),
                (
                    "status",
                    models.CharField(
                        choices=[
                            ("processing", "처리 중"),
                            ("completed", "완료"),
                            ("failed", "실패"),
                        ],
                        default="processing",
                        max_length=20,
                    ),
                ),
                (
                    "exit_code",
                    models.IntegerField(blank=True, null=True, verbose_name="종료 코드"),
                ),
                (
                    "error_message",
                    models.TextField(blank=True, null=True, verbose_name="오류 메시지"),
                ),
                ("created_at", models.DateTimeField(auto_now_add=True)),
                ("updated_at", models.DateTimeField(auto_now=True)),
            ],
            options={
                "verbose_name": "분석 실행",
                "verbose_name_plural": "분석 실행 기록",
                "ordering": ["-created_at"],
            },
        ),
    ]
