# Generated by Django 5.2.7 on 2026-10-17 14:03

from django.db import migrations, models


class Migration(migrations.Migration):

    dependencies = [
        ("equilibria", "0001_initial"),
    ]

    operations = [
        migrations.AddField(
            model_name="analysisrun",
            name="progress",
            field=models.JSONField(blank=True, default=dict, verbose_name="진행 단계"),
        ),
        migrations.AddField(
            model_name="analysisrun",
            name="progress_at",
            field=models.DateTimeField(blank=True, null=True, verbose_name="마지막 진행 일시"),
        ),
    ]
