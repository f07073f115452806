"""Pydantic schemas for inputs, configs and reports."""

from .common import *  # noqa: F403
from .datagen import *  # noqa: F403
from .dataset import *  # noqa: F403
from .experiment import *  # noqa: F403
from .metrics import *  # noqa: F403
from .remote import *  # noqa: F403
from .simscore import *  # noqa: F403
