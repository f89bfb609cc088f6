#!/usr/bin/env python
"""
거리 기반 균형 분석 도구의 명령행 진입점

사용법:
    python manage.py verify games/trembling.json --profile "p0:Up;p1:Left" --r 0.1 --metric linf
    python manage.py help          # 분석 명령 목록 (verify, enumerate, search, robust, ladder, audit,
                                   # oracle, poa, delta, smoothness, consensus, sweep)
    python manage.py test equilibria
"""
import os
import sys


def main():
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "config.settings")
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Django를 불러올 수 없습니다. requirements.txt의 패키지가 설치된 가상 환경을 활성화했는지 확인하세요."
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == "__main__":
    main()
