# Tasks package
from celery_app import celery
