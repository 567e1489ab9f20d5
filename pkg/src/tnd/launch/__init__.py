from .commands import exit_code, launch
