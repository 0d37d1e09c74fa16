from .agent import AgentConfig, Mode, ModeState, RobotAgent, Transition

__all__ = ["AgentConfig", "Mode", "ModeState", "RobotAgent", "Transition"]
