from collections.abc import Callable
import logging
from typing import Any

from core.exceptions import PaadaError


class Events:
    """
    Defines event types for the EventBus.
    """

    EPOCH_COMPLETED = "epoch_completed"
    CHECKPOINT_SAVED = "checkpoint_saved"
    TRAINING_FINISHED = "training_finished"


class EventBus:
    """
    A simple synchronous event bus connecting the trainer to evaluation and metrics subscribers.
    """

    def __init__(self):
        self.logger = logging.getLogger(self.__class__.__name__)
        self.subscribers: dict[str, list[Callable[[Any], None]]] = {}

    def subscribe(
        self,
        event_type: str,
        callback: Callable[[Any], None],
    ) -> None:
        """
        Subscribes a callback to a specific event type.

        Args:
            event_type: The type of event to subscribe to.
            callback: The callback function to invoke when the event is published.
        """
        if event_type not in self.subscribers:
            self.subscribers[event_type] = []

        self.subscribers[event_type].append(callback)
        callback_name = getattr(callback, "__name__", str(callback))
        self.logger.debug(f"Callback '{callback_name}' subscribed to event: {event_type}")

    def publish_sync(
        self,
        event_type: str,
        data: Any,
    ) -> None:
        """
        Publishes an event to all subscribers, in subscription order.
        """
        if event_type not in self.subscribers:
            self.logger.debug(f"No subscribers for event: {event_type}")
            return

        for callback in self.subscribers[event_type]:
            self._safe_invoke_sync(callback, data)

    def _safe_invoke_sync(
        self,
        callback: Callable[[Any], None],
        data: Any,
    ) -> None:
        """
        Invokes a callback, logging failures. Numerical, precondition and I/O failures still stop the run.
        """
        try:
            callback(data)
        except (PaadaError, OSError):
            raise
        except Exception as e:
            self.logger.error(f"Error in sync subscriber callback: {e}", exc_info=True)
