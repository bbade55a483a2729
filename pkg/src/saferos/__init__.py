"""Supervised autonomy at desk scale: a navigation controller, a verifiable
safety agent, a velocity interceptor, and the tools to check them."""

__version__ = "0.1.0"
