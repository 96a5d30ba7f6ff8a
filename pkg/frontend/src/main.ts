import { StudyApi } from './api.js';
import { SessionController } from './session.js';
import { RaterView } from './ui.js';

window.addEventListener('DOMContentLoaded', () => {
  const root = document.getElementById('app');
  if (!root) {
    throw new Error('missing #app mount point');
  }
  const controller = new SessionController(new StudyApi(), window.localStorage);
  const view = new RaterView(root, controller);
  void view.boot();
});
